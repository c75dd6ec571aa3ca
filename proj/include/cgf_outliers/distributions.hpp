#pragma once

#include "cgf_outliers/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cgf_outliers {

using SquareMatrix = Eigen::MatrixXd;

// Multivariate skew-normal SN(eta, Sigma, alpha) with the derived quantities
//   sigma = sqrt(diag Sigma),  C = diag(sigma)^-1 Sigma diag(sigma)^-1,
//   delta = C alpha / sqrt((pi/2)(1 + alpha' C alpha)),
//   mean  = eta + diag(sigma) delta,
//   cov   = Sigma - diag(sigma) delta delta' diag(sigma).
// Note `delta` carries the sqrt(2/pi) factor; the usual shape-to-skewness
// vector of the stochastic representation is sqrt(pi/2) * delta.
struct SkewNormalParams {
  Vector eta;
  SquareMatrix sigma_mat;
  Vector alpha;

  Vector sigma_diag;
  SquareMatrix corr;
  Vector delta;
  Vector mean_vec;
  SquareMatrix cov_mat;

  // Validates (Sigma SPD, matching sizes) and fills the derived fields.
  static SkewNormalParams make(Vector eta, SquareMatrix sigma_mat, Vector alpha);

  Vector representation_delta() const;
};

enum class Family { std_normal, normal, skew_normal, student_t };

std::string to_string(Family f);
Family parse_family(const std::string& name);  // stdnormal | normal | skewnormal | student

struct SimulationSpec {
  Family family = Family::std_normal;
  std::size_t n = 30;
  std::size_t T = 500;
  SquareMatrix sigma_mat;       // ignored (identity) for std_normal
  std::optional<Vector> alpha;  // skew_normal only
  std::optional<double> nu;     // student_t only
  double outlier_scale = 15.0;
  double outlier_row_frac = 0.1;
  double outlier_col_frac = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t outlier_rows() const;
  std::size_t outlier_cols() const;
};

struct LabeledDataset {
  DataMatrix data;
  std::vector<bool> truth;
};

// Rows i.i.d. N(0, Sigma) through the Cholesky factor of Sigma.
DataMatrix sample_normal(const SquareMatrix& sigma_mat, std::size_t T, std::uint64_t seed);

// X = eta + diag(sigma) (delta_r |w0| + z), z ~ N(0, C - delta_r delta_r'),
// with delta_r the representation delta. With alpha = 0 this is exactly
// sample_normal(Sigma) shifted by eta.
DataMatrix sample_skew_normal(const SkewNormalParams& params, std::size_t T, std::uint64_t seed);

// Closed-form CGF of SN(eta, Sigma, alpha) at xi; `centered` subtracts xi' mean.
double cgf_skew_normal_analytic(const Vector& xi, const SkewNormalParams& params, bool centered);

// Rows Z / sqrt(W / nu), Z ~ N(0, Sigma), W ~ chi^2(nu). Requires nu > 2.
DataMatrix sample_student_t(const SquareMatrix& sigma_mat, double nu, std::size_t T, std::uint64_t seed);

// Ordinary data from the family with Sigma, then a floor(row_frac T) x
// floor(col_frac n) block drawn with outlier_scale * Sigma (restricted to the
// chosen columns) overwrites one shared set of rows in the chosen columns.
LabeledDataset inject_outliers(const SimulationSpec& spec);

// Random SPD matrix with eigenvalues geometrically spaced from `condition`
// down to 1 in a random orthonormal basis.
SquareMatrix synthetic_covariance(std::size_t n, double condition, std::uint64_t seed);

// alpha_j ~ U[lo, hi] i.i.d.
Vector draw_alpha(std::size_t n, double lo, double hi, std::uint64_t seed);

// Phi(x) and ln(2 Phi(x)), the latter accurate far into the lower tail.
double normal_cdf(double x);
double log_two_phi(double x);

}  // namespace cgf_outliers
