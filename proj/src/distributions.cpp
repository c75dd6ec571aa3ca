#include "cgf_outliers/distributions.hpp"

#include "cgf_outliers/errors.hpp"
#include "cgf_outliers/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cgf_outliers {

namespace {

// Stream ids; kept fixed so the same seed always reproduces the same parts.
constexpr std::uint64_t kStreamGaussian = 0;
constexpr std::uint64_t kStreamChiSquare = 1;
constexpr std::uint64_t kStreamHalfNormal = 2;

constexpr std::uint64_t kInjectOrdinary = 11;
constexpr std::uint64_t kInjectRows = 12;
constexpr std::uint64_t kInjectCols = 13;
constexpr std::uint64_t kInjectBlock = 14;

Eigen::MatrixXd cholesky_lower(const SquareMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ParameterError(std::string(what) + ": matrix must be square and non-empty");
  if (!m.allFinite()) throw ParameterError(std::string(what) + ": matrix has non-finite entries");
  if (!m.isApprox(m.transpose(), 1e-12)) throw ParameterError(std::string(what) + ": matrix is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw ParameterError(std::string(what) + ": matrix is not positive definite");
  return llt.matrixL();
}

// Rows L z with z ~ N(0, I) from the Gaussian stream of `seed`.
Matrix correlated_gaussian_rows(const Eigen::MatrixXd& lower, std::size_t T, std::uint64_t seed) {
  const Eigen::Index n = lower.rows();
  Rng rng = make_stream(seed, kStreamGaussian);
  std::normal_distribution<double> normal;
  Matrix out(static_cast<Eigen::Index>(T), n);
  Vector z(n);
  for (Eigen::Index t = 0; t < out.rows(); ++t) {
    for (auto& v : z) v = normal(rng);
    out.row(t) = (lower.triangularView<Eigen::Lower>() * z).transpose();
  }
  return out;
}

// k distinct indices from [0, m), ascending.
std::vector<std::size_t> choose_without_replacement(std::size_t m, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, m - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

SquareMatrix submatrix(const SquareMatrix& m, const std::vector<std::size_t>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  SquareMatrix out(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      out(a, b) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(a)]),
                    static_cast<Eigen::Index>(idx[static_cast<std::size_t>(b)]));
    }
  }
  return out;
}

DataMatrix sample_family(const SimulationSpec& spec, const SquareMatrix& sigma, const std::optional<Vector>& alpha,
                         std::size_t T, std::uint64_t seed) {
  switch (spec.family) {
    case Family::std_normal:
    case Family::normal:
      return sample_normal(sigma, T, seed);
    case Family::skew_normal:
      return sample_skew_normal(SkewNormalParams::make(Vector::Zero(sigma.rows()), sigma, *alpha), T, seed);
    case Family::student_t:
      return sample_student_t(sigma, *spec.nu, T, seed);
  }
  throw ParameterError("unknown family");
}

}  // namespace

SkewNormalParams SkewNormalParams::make(Vector eta, SquareMatrix sigma_mat, Vector alpha) {
  const Eigen::Index n = sigma_mat.rows();
  if (eta.size() != n || alpha.size() != n) throw ParameterError("skew-normal: eta/alpha size does not match Sigma");
  cholesky_lower(sigma_mat, "skew-normal scale");
  if (!eta.allFinite() || !alpha.allFinite()) throw ParameterError("skew-normal: non-finite eta or alpha");

  SkewNormalParams p;
  p.eta = std::move(eta);
  p.sigma_mat = std::move(sigma_mat);
  p.alpha = std::move(alpha);
  p.sigma_diag = p.sigma_mat.diagonal().cwiseSqrt();
  const Vector inv_sigma = p.sigma_diag.cwiseInverse();
  p.corr = inv_sigma.asDiagonal() * p.sigma_mat * inv_sigma.asDiagonal();
  const Vector c_alpha = p.corr * p.alpha;
  const double quad = p.alpha.dot(c_alpha);
  p.delta = c_alpha / std::sqrt(0.5 * std::numbers::pi * (1.0 + quad));
  const Vector scaled_delta = p.sigma_diag.cwiseProduct(p.delta);
  p.mean_vec = p.eta + scaled_delta;
  p.cov_mat = p.sigma_mat - scaled_delta * scaled_delta.transpose();
  return p;
}

Vector SkewNormalParams::representation_delta() const { return std::sqrt(0.5 * std::numbers::pi) * delta; }

std::string to_string(Family f) {
  switch (f) {
    case Family::std_normal: return "stdnormal";
    case Family::normal: return "normal";
    case Family::skew_normal: return "skewnormal";
    case Family::student_t: return "student";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "stdnormal" || name == "std_normal") return Family::std_normal;
  if (name == "normal") return Family::normal;
  if (name == "skewnormal" || name == "skew_normal") return Family::skew_normal;
  if (name == "student" || name == "student_t" || name == "t") return Family::student_t;
  throw ArgumentError("unknown distribution family '" + name + "'");
}

void SimulationSpec::validate() const {
  if (n < 1 || T < 1) throw ParameterError("simulation: n and T must be >= 1");
  if (!(outlier_row_frac > 0.0 && outlier_row_frac < 1.0) || !(outlier_col_frac > 0.0 && outlier_col_frac < 1.0)) {
    throw ParameterError("simulation: outlier fractions must lie in (0,1)");
  }
  if (!(outlier_scale > 0.0) || !std::isfinite(outlier_scale)) throw ParameterError("simulation: outlier_scale must be > 0");
  if (outlier_rows() < 1) throw ParameterError("simulation: floor(outlier_row_frac * T) < 1, no outlier rows");
  if (outlier_cols() < 1) throw ParameterError("simulation: floor(outlier_col_frac * n) < 1, no outlier columns");
  if (family != Family::std_normal) {
    if (sigma_mat.rows() != static_cast<Eigen::Index>(n) || sigma_mat.cols() != static_cast<Eigen::Index>(n)) {
      throw ParameterError("simulation: covariance must be n x n");
    }
  }
  if (family == Family::skew_normal && (!alpha || alpha->size() != static_cast<Eigen::Index>(n))) {
    throw ParameterError("simulation: skew-normal needs an alpha of length n");
  }
  if (family == Family::student_t && (!nu || !(*nu > 2.0))) {
    throw ParameterError("simulation: student-t needs nu > 2");
  }
}

std::size_t SimulationSpec::outlier_rows() const {
  return static_cast<std::size_t>(std::floor(outlier_row_frac * static_cast<double>(T)));
}

std::size_t SimulationSpec::outlier_cols() const {
  return static_cast<std::size_t>(std::floor(outlier_col_frac * static_cast<double>(n)));
}

DataMatrix sample_normal(const SquareMatrix& sigma_mat, std::size_t T, std::uint64_t seed) {
  return DataMatrix(correlated_gaussian_rows(cholesky_lower(sigma_mat, "normal covariance"), T, seed));
}

DataMatrix sample_skew_normal(const SkewNormalParams& params, std::size_t T, std::uint64_t seed) {
  const Vector delta_r = params.representation_delta();
  if ((delta_r.array().abs() >= 1.0).any()) throw ParameterError("skew-normal: |delta_j| >= 1");
  const bool skewed = (delta_r.array() != 0.0).any();

  const Vector shift = params.sigma_diag.cwiseProduct(delta_r);
  const SquareMatrix residual = params.sigma_mat - shift * shift.transpose();
  Matrix x = correlated_gaussian_rows(cholesky_lower(residual, "skew-normal residual covariance"), T, seed);
  if (skewed) {
    Rng rng = make_stream(seed, kStreamHalfNormal);
    std::normal_distribution<double> normal;
    for (Eigen::Index t = 0; t < x.rows(); ++t) x.row(t) += std::abs(normal(rng)) * shift.transpose();
  }
  if ((params.eta.array() != 0.0).any()) x.rowwise() += params.eta.transpose();
  return DataMatrix(std::move(x));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_two_phi(double x) {
  // 2 Phi(x) = erfc(-x / sqrt 2). For x << 0 erfc underflows, so use
  // ln erfc(u) = -u^2 - ln(u sqrt(pi)) + ln(sum_k (-1)^k (2k-1)!! / (2u^2)^k).
  const double u = -x / std::numbers::sqrt2;
  if (u < 20.0) return std::log(std::erfc(u));
  const double h = 0.5 / (u * u);
  double series = 1.0;
  double term = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2.0 * k - 1.0) * h;
    series += term;
  }
  return -u * u - std::log(u * std::sqrt(std::numbers::pi)) + std::log(series);
}

double cgf_skew_normal_analytic(const Vector& xi, const SkewNormalParams& params, bool centered) {
  if (xi.size() != params.eta.size()) throw ArgumentError("cgf_skew_normal_analytic: dimension mismatch");
  const double arg = std::sqrt(0.5 * std::numbers::pi) * params.delta.dot(params.sigma_diag.cwiseProduct(xi));
  double g = xi.dot(params.eta) + 0.5 * xi.dot(params.sigma_mat * xi) + log_two_phi(arg);
  if (centered) g -= xi.dot(params.mean_vec);
  return g;
}

DataMatrix sample_student_t(const SquareMatrix& sigma_mat, double nu, std::size_t T, std::uint64_t seed) {
  if (!(nu > 2.0) || !std::isfinite(nu)) throw ParameterError("student-t: nu must be > 2");
  Matrix x = correlated_gaussian_rows(cholesky_lower(sigma_mat, "student-t scale"), T, seed);
  Rng rng = make_stream(seed, kStreamChiSquare);
  std::chi_squared_distribution<double> chi2(nu);
  for (Eigen::Index t = 0; t < x.rows(); ++t) x.row(t) /= std::sqrt(chi2(rng) / nu);
  return DataMatrix(std::move(x));
}

LabeledDataset inject_outliers(const SimulationSpec& spec) {
  spec.validate();
  const SquareMatrix sigma = spec.family == Family::std_normal
                                 ? SquareMatrix::Identity(static_cast<Eigen::Index>(spec.n), static_cast<Eigen::Index>(spec.n))
                                 : spec.sigma_mat;

  LabeledDataset out;
  out.data = sample_family(spec, sigma, spec.alpha, spec.T, splitmix64(spec.seed ^ kInjectOrdinary));

  Rng row_rng = make_stream(spec.seed, kInjectRows);
  Rng col_rng = make_stream(spec.seed, kInjectCols);
  const auto rows = choose_without_replacement(spec.T, spec.outlier_rows(), row_rng);
  const auto cols = choose_without_replacement(spec.n, spec.outlier_cols(), col_rng);

  const SquareMatrix block_sigma = spec.outlier_scale * submatrix(sigma, cols);
  std::optional<Vector> block_alpha;
  if (spec.alpha) {
    Vector a(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) a[static_cast<Eigen::Index>(j)] = (*spec.alpha)[static_cast<Eigen::Index>(cols[j])];
    block_alpha = std::move(a);
  }
  const DataMatrix block = sample_family(spec, block_sigma, block_alpha, rows.size(), splitmix64(spec.seed ^ kInjectBlock));

  out.truth.assign(spec.T, false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.truth[rows[i]] = true;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out.data.values(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j])) =
          block.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

SquareMatrix synthetic_covariance(std::size_t n, double condition, std::uint64_t seed) {
  if (n < 1) throw ParameterError("synthetic_covariance: n must be >= 1");
  if (!(condition >= 1.0)) throw ParameterError("synthetic_covariance: condition must be >= 1");
  const auto k = static_cast<Eigen::Index>(n);
  Rng rng = make_stream(seed, 0x5EC0);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ();
  Vector eig(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double frac = k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1);
    eig[i] = std::pow(condition, 1.0 - frac);
  }
  SquareMatrix s = q * eig.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

Vector draw_alpha(std::size_t n, double lo, double hi, std::uint64_t seed) {
  if (!(hi >= lo)) throw ParameterError("draw_alpha: empty range");
  Rng rng = make_stream(seed, 0xA1FA);
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector a(static_cast<Eigen::Index>(n));
  for (auto& v : a) v = unif(rng);
  return a;
}

}  // namespace cgf_outliers
