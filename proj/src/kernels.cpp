#include "cgf_outliers/kernels.hpp"

#include "cgf_outliers/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cgf_outliers::kernels {

namespace {

struct BlockPartial {
  double max_exponent = -std::numeric_limits<double>::infinity();
  double weight_sum = 0.0;  // sum exp(s_t - max_exponent)
  Vector weighted_rows;     // sum x_t exp(s_t - max_exponent)
};

Eigen::Index block_count(Eigen::Index rows) { return (rows + kBlockRows - 1) / kBlockRows; }

void fill_block(const Matrix& x, const Vector& theta, double r, Eigen::Index b, bool want_rows,
                BlockPartial& out) {
  const Eigen::Index begin = b * kBlockRows;
  const Eigen::Index len = std::min(kBlockRows, x.rows() - begin);
  const auto block = x.middleRows(begin, len);
  Eigen::ArrayXd s = r * (block * theta).array();
  out.max_exponent = s.maxCoeff();
  Eigen::ArrayXd w = (s - out.max_exponent).exp();
  out.weight_sum = w.sum();
  if (want_rows) out.weighted_rows = block.transpose() * w.matrix();
}

// Runs fill_block over all blocks, in parallel when allowed, then merges the
// partials in block order.
BlockPartial reduce_blocks(const Matrix& x, const Vector& theta, double r, bool want_rows) {
  const Eigen::Index nblocks = block_count(x.rows());
  std::vector<BlockPartial> parts(static_cast<std::size_t>(nblocks));
  const bool fork = nblocks > 1 && can_fork();
#pragma omp parallel for schedule(static) if (fork) num_threads(thread_cap())
  for (Eigen::Index b = 0; b < nblocks; ++b) {
    fill_block(x, theta, r, b, want_rows, parts[static_cast<std::size_t>(b)]);
  }

  BlockPartial total;
  for (const auto& p : parts) total.max_exponent = std::max(total.max_exponent, p.max_exponent);
  if (want_rows) total.weighted_rows = Vector::Zero(x.cols());
  for (const auto& p : parts) {
    const double scale = std::exp(p.max_exponent - total.max_exponent);
    total.weight_sum += scale * p.weight_sum;
    if (want_rows) total.weighted_rows += scale * p.weighted_rows;
  }
  return total;
}

}  // namespace

ExpMoments exp_moments(const Matrix& x, const Vector& theta, double r) {
  const BlockPartial total = reduce_blocks(x, theta, r, true);
  ExpMoments out;
  out.log_mean_exp = total.max_exponent + std::log(total.weight_sum / static_cast<double>(x.rows()));
  out.weighted_mean = total.weighted_rows / total.weight_sum;
  return out;
}

double log_mean_exp(const Matrix& x, const Vector& theta, double r) {
  const BlockPartial total = reduce_blocks(x, theta, r, false);
  return total.max_exponent + std::log(total.weight_sum / static_cast<double>(x.rows()));
}

ExpMoments exp_moments_reference(const Matrix& x, const Vector& theta, double r) {
  const Eigen::Index rows = x.rows();
  const Eigen::Index cols = x.cols();
  std::vector<double> s(static_cast<std::size_t>(rows));
  double smax = -std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < rows; ++t) {
    double dot = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) dot += x(t, j) * theta[j];
    s[static_cast<std::size_t>(t)] = r * dot;
    smax = std::max(smax, r * dot);
  }
  double wsum = 0.0;
  Vector acc = Vector::Zero(cols);
  for (Eigen::Index t = 0; t < rows; ++t) {
    const double w = std::exp(s[static_cast<std::size_t>(t)] - smax);
    wsum += w;
    for (Eigen::Index j = 0; j < cols; ++j) acc[j] += w * x(t, j);
  }
  ExpMoments out;
  out.log_mean_exp = smax + std::log(wsum / static_cast<double>(rows));
  out.weighted_mean = acc / wsum;
  return out;
}

double log_mean_exp_reference(const Matrix& x, const Vector& theta, double r) {
  return exp_moments_reference(x, theta, r).log_mean_exp;
}

Vector project(const Matrix& x, const Vector& theta) { return x * theta; }

}  // namespace cgf_outliers::kernels
