#include "cgf_outliers/cgf.hpp"

#include "cgf_outliers/errors.hpp"
#include "cgf_outliers/kernels.hpp"
#include "cgf_outliers/parallel.hpp"
#include "cgf_outliers/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cgf_outliers {

namespace {

void check_cgf_args(const DataMatrix& data, double r, const UnitDirection& theta) {
  data.validate(1);
  if (!(r >= 0.0) || !std::isfinite(r)) throw ArgumentError("radius must be finite and >= 0");
  if (theta.size() != data.cols()) throw ArgumentError("direction dimension does not match data");
}

// eps^2 as a function of a = r^2 lambda1.
double relative_variance_of_a(double a, double T) {
  return 4.0 / T * std::expm1(a) / (a * a);
}

}  // namespace

double cgf_estimate(const DataMatrix& data, double r, const UnitDirection& theta) {
  check_cgf_args(data, r, theta);
  if (r == 0.0) return 0.0;
  return kernels::log_mean_exp(data.values, theta.theta(), r);
}

Vector cgf_gradient(const DataMatrix& data, double r, const UnitDirection& theta) {
  check_cgf_args(data, r, theta);
  if (r == 0.0) return Vector::Zero(static_cast<Eigen::Index>(data.cols()));
  return r * kernels::exp_moments(data.values, theta.theta(), r).weighted_mean;
}

double relative_variance(double r, double lambda1, std::size_t T) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ArgumentError("relative_variance: r must be > 0");
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) {
    throw ArgumentError("relative_variance: lambda1 must be > 0");
  }
  if (T < 1) throw ArgumentError("relative_variance: T must be >= 1");
  return relative_variance_of_a(r * r * lambda1, static_cast<double>(T));
}

double error_curve_argmin() {
  // d/da [(e^a - 1)/a^2] = 0  <=>  e^a (a - 2) + 2 = 0, single root in (1, 2).
  double lo = 1.0;
  double hi = 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::exp(mid) * (mid - 2.0) + 2.0 < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

RadiusSelection select_radius(double lambda1, std::size_t T, double target_eps) {
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) throw ArgumentError("select_radius: lambda1 must be > 0");
  if (T < 2) throw ArgumentError("select_radius: T must be >= 2");
  if (!(target_eps > 0.0 && target_eps < 1.0)) throw ArgumentError("select_radius: target_eps must be in (0,1)");

  const double Td = static_cast<double>(T);
  const double target_sq = target_eps * target_eps;
  const double a_star = error_curve_argmin();
  const double min_sq = relative_variance_of_a(a_star, Td);

  RadiusSelection out;
  out.lambda1 = lambda1;
  out.target_eps = target_eps;
  if (min_sq > target_sq) {
    out.r_bar = std::sqrt(a_star / lambda1);
    out.feasible = false;
    out.eps_achieved = std::sqrt(min_sq);
    return out;
  }

  // Increasing branch: bracket then bisect; keep `lo` on the feasible side.
  double lo = a_star;
  double hi = 2.0 * a_star;
  while (relative_variance_of_a(hi, Td) <= target_sq) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-14 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (relative_variance_of_a(mid, Td) <= target_sq) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.r_bar = std::sqrt(lo / lambda1);
  out.feasible = true;
  out.eps_achieved = std::sqrt(relative_variance_of_a(lo, Td));
  return out;
}

std::vector<UnitDirection> sample_unit_sphere(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("sample_unit_sphere: n must be >= 1");
  std::vector<UnitDirection> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Rng rng = make_stream(seed, k);
    std::normal_distribution<double> normal;
    Vector v(static_cast<Eigen::Index>(n));
    // A zero draw has probability zero, but redraw rather than divide by it.
    do {
      for (auto& x : v) x = normal(rng);
    } while (v.squaredNorm() == 0.0);
    out.emplace_back(v);
  }
  return out;
}

void MultistartConfig::validate() const {
  if (n_starts < 1) throw ArgumentError("multistart: n_starts must be >= 1");
  if (!(tolerance > 0.0)) throw ArgumentError("multistart: tolerance must be > 0");
  if (max_iters < 1) throw ArgumentError("multistart: max_iters must be >= 1");
  if (!(dedup_cos > 0.0 && dedup_cos < 1.0)) throw ArgumentError("multistart: dedup_cos must be in (0,1)");
}

AscentResult ascend(const DataMatrix& data, double r, const UnitDirection& start, double tolerance,
                    std::size_t max_iters, bool keep_trace) {
  check_cgf_args(data, r, start);
  if (!(r > 0.0)) throw ArgumentError("ascend: r must be > 0");

  AscentResult res;
  Vector theta = start.theta();
  kernels::ExpMoments em = kernels::exp_moments(data.values, theta, r);
  if (keep_trace) res.trace.push_back(em.log_mean_exp);

  while (res.iterations < max_iters) {
    // (1/r) * grad G is exactly the weighted row mean.
    Vector next = theta + em.weighted_mean;
    const double norm = next.norm();
    if (!(norm > 0.0)) break;
    next /= norm;
    const double step = (next - theta).norm();
    theta = std::move(next);
    ++res.iterations;

    const double previous = em.log_mean_exp;
    em = kernels::exp_moments(data.values, theta, r);
    if (keep_trace) res.trace.push_back(em.log_mean_exp);
    if (em.log_mean_exp < previous - 1e-12 * std::max(1.0, std::abs(previous))) ++res.ascent_violations;

    if (step <= tolerance) {
      res.converged = true;
      break;
    }
  }
  res.direction = UnitDirection::from_normalized(theta);
  res.cgf_value = em.log_mean_exp;
  return res;
}

MaximizerResult maximize_cgf(const DataMatrix& data, double r, const MultistartConfig& config) {
  data.validate(1);
  config.validate();
  if (!(r > 0.0) || !std::isfinite(r)) throw ArgumentError("maximize_cgf: r must be finite and > 0");

  const std::size_t n = data.cols();
  const auto starts = static_cast<std::ptrdiff_t>(config.n_starts);
  const std::vector<UnitDirection> initial = sample_unit_sphere(n, config.n_starts, config.seed);
  std::vector<AscentResult> runs(config.n_starts);

  // Parallel map over starts; start k only touches runs[k] and its own stream.
  const bool fork = starts > 1 && can_fork();
#pragma omp parallel for schedule(dynamic, 1) if (fork) num_threads(thread_cap())
  for (std::ptrdiff_t k = 0; k < starts; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    runs[idx] = ascend(data, r, initial[idx], config.tolerance, config.max_iters);
  }

  MaximizerResult out;
  out.starts_total = config.n_starts;
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    out.ascent_violations += runs[k].ascent_violations;
    if (runs[k].converged) order.push_back(k);
  }
  out.starts_converged = order.size();
  if (order.empty()) {
    throw ConvergenceError("maximize_cgf: no start converged within max_iters", std::move(runs));
  }
  // CGF-descending; start index breaks ties so the order never depends on scheduling.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return runs[a].cgf_value > runs[b].cgf_value;
  });
  for (std::size_t k : order) {
    const auto& cand = runs[k];
    const bool duplicate = std::any_of(out.directions.begin(), out.directions.end(), [&](const UnitDirection& kept) {
      return std::abs(kept.cosine(cand.direction)) > config.dedup_cos;
    });
    if (duplicate) continue;
    out.directions.push_back(cand.direction);
    out.cgf_values.push_back(cand.cgf_value);
    out.iteration_counts.push_back(cand.iterations);
  }
  return out;
}

}  // namespace cgf_outliers
