#include "cgf_outliers/stats.hpp"

#include "cgf_outliers/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cgf_outliers {

DataMatrix::DataMatrix(Matrix v, std::vector<std::string> labels)
    : values(std::move(v)), row_labels(std::move(labels)) {}

void DataMatrix::validate(std::size_t min_rows) const {
  if (rows() < min_rows) {
    throw ArgumentError("data matrix needs at least " + std::to_string(min_rows) +
                        " rows, got " + std::to_string(rows()));
  }
  if (cols() < 1) throw ArgumentError("data matrix has no columns");
  if (!values.allFinite()) throw ArgumentError("data matrix contains non-finite entries");
  if (has_labels() && row_labels.size() != rows()) {
    throw ArgumentError("row label count does not match row count");
  }
}

DataMatrix DataMatrix::select_rows(const std::vector<std::size_t>& keep) const {
  Matrix out(static_cast<Eigen::Index>(keep.size()), values.cols());
  std::vector<std::string> labels;
  if (has_labels()) labels.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = values.row(static_cast<Eigen::Index>(keep[i]));
    if (has_labels()) labels.push_back(row_labels[keep[i]]);
  }
  return DataMatrix(std::move(out), std::move(labels));
}

UnitDirection::UnitDirection(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ArgumentError("direction must be a nonzero finite vector");
  }
  theta_ = v / norm;
}

UnitDirection UnitDirection::from_normalized(Vector v) {
  UnitDirection d;
  d.theta_ = std::move(v);
  return d;
}

CenteredData center(const DataMatrix& data) {
  data.validate(1);
  Vector mean = data.values.colwise().mean().transpose();
  Matrix centered = data.values.rowwise() - mean.transpose();
  return {DataMatrix(std::move(centered), data.row_labels), std::move(mean)};
}

CovarianceSummary covariance_pca(const DataMatrix& data) {
  data.validate(2);
  const auto T = static_cast<double>(data.rows());
  Matrix centered = data.values.rowwise() - data.values.colwise().mean();
  Matrix cov = (centered.transpose() * centered) / (T - 1.0);
  cov = 0.5 * (cov + cov.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw DegenerateInputError("symmetric eigensolver failed to converge");
  }
  // Eigen returns ascending order.
  const Eigen::Index n = cov.rows();
  CovarianceSummary out;
  out.matrix = std::move(cov);
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  // Sign convention: largest-magnitude component of each eigenvector positive.
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index arg = 0;
    out.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (out.eigenvectors(arg, k) < 0.0) out.eigenvectors.col(k) *= -1.0;
  }
  return out;
}

double median(std::span<const double> z) {
  if (z.empty()) throw ArgumentError("median of an empty vector");
  std::vector<double> buf(z.begin(), z.end());
  const std::size_t mid = buf.size() / 2;
  std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid), buf.end());
  const double upper = buf[mid];
  if (buf.size() % 2 == 1) return upper;
  const double lower = *std::max_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

MedianMad median_and_mad(std::span<const double> z) {
  if (z.empty()) throw ArgumentError("median_and_mad of an empty vector");
  const double med = median(z);
  std::vector<double> dev(z.size());
  std::transform(z.begin(), z.end(), dev.begin(), [med](double v) { return std::abs(v - med); });
  return {med, median(dev)};
}

namespace {

struct CentralMoments {
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

CentralMoments central_moments(std::span<const double> z) {
  CentralMoments m;
  const auto count = static_cast<double>(z.size());
  for (double v : z) m.mean += v;
  m.mean /= count;
  for (double v : z) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m.m2 += d2;
    m.m3 += d2 * d;
    m.m4 += d2 * d2;
  }
  m.m2 /= count;
  m.m3 /= count;
  m.m4 /= count;
  return m;
}

}  // namespace

double kurtosis(std::span<const double> z) {
  if (z.size() < 2) throw ArgumentError("kurtosis needs at least 2 values");
  const CentralMoments m = central_moments(z);
  // Relative cutoff so that round-off around a constant vector counts as zero.
  double scale = 0.0;
  for (double v : z) scale = std::max(scale, std::abs(v));
  if (!(m.m2 > 1e-28 * scale * scale) || m.m2 == 0.0) {
    throw DegenerateInputError("kurtosis of a zero-variance vector");
  }
  return m.m4 / (m.m2 * m.m2);
}

Cumulants first_four_cumulants(std::span<const double> z) {
  if (z.empty()) throw ArgumentError("cumulants of an empty vector");
  const CentralMoments m = central_moments(z);
  return {m.mean, m.m2, m.m3, m.m4 - 3.0 * m.m2 * m.m2};
}

}  // namespace cgf_outliers
