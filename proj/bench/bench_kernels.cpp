// Reference vs blocked/OpenMP CGF kernels, plus one multistart run.
//   bench_kernels [T] [n] [reps]
#include "cgf_outliers/cgf.hpp"
#include "cgf_outliers/distributions.hpp"
#include "cgf_outliers/kernels.hpp"
#include "cgf_outliers/parallel.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace cgf_outliers;

namespace {

template <class F>
double seconds_per_call(F&& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t T = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
  const std::size_t n = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 30;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 50;

  const DataMatrix data = sample_normal(SquareMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), T, 1);
  const UnitDirection theta = sample_unit_sphere(n, 1, 7).front();
  const double r = 0.5;
  volatile double sink = 0.0;

  std::printf("T=%zu n=%zu threads=%d\n", T, n, thread_cap());
  const double ref = seconds_per_call([&] { sink = kernels::exp_moments_reference(data.values, theta.theta(), r).log_mean_exp; }, reps);
  const double blk = seconds_per_call([&] { sink = kernels::exp_moments(data.values, theta.theta(), r).log_mean_exp; }, reps);
  std::printf("exp_moments    reference %10.3f us   blocked %10.3f us   speedup %.2fx\n", ref * 1e6, blk * 1e6, ref / blk);
  const double lref = seconds_per_call([&] { sink = kernels::log_mean_exp_reference(data.values, theta.theta(), r); }, reps);
  const double lblk = seconds_per_call([&] { sink = kernels::log_mean_exp(data.values, theta.theta(), r); }, reps);
  std::printf("log_mean_exp   reference %10.3f us   blocked %10.3f us   speedup %.2fx\n", lref * 1e6, lblk * 1e6, lref / lblk);

  const DataMatrix small = sample_normal(SquareMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), 500, 2);
  MultistartConfig cfg;
  cfg.n_starts = 200;
  cfg.seed = 3;
  const auto t0 = std::chrono::steady_clock::now();
  const MaximizerResult res = maximize_cgf(small, 1.0, cfg);
  const auto t1 = std::chrono::steady_clock::now();
  std::printf("maximize_cgf   T=500 starts=%zu: %.3f s, %zu distinct directions\n", cfg.n_starts,
              std::chrono::duration<double>(t1 - t0).count(), res.directions.size());
  (void)sink;
  return 0;
}
