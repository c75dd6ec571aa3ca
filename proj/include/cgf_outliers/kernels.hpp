#pragma once

#include "cgf_outliers/types.hpp"

// Inner loops of the empirical CGF. Every quantity reduces over the T rows of
// the data, so each kernel exists twice:
//
//   *_reference  plain single pass, kept as the test oracle
//   (unsuffixed) fixed-size row blocks reduced in block order; the blocks run
//                under OpenMP when the caller is not already parallel
//
// The blocked kernels give bit-identical output for any thread count because
// the block partition and the order of the final reduction never change.

namespace cgf_outliers::kernels {

inline constexpr Eigen::Index kBlockRows = 256;

// For s_t = r * theta' x_t:
//   log_mean_exp  = ln( (1/T) sum_t exp(s_t) )
//   weighted_mean = sum_t x_t exp(s_t) / sum_t exp(s_t)
// Both are evaluated with max-subtraction, so large s_t never overflow.
struct ExpMoments {
  double log_mean_exp = 0.0;
  Vector weighted_mean;
};

ExpMoments exp_moments(const Matrix& x, const Vector& theta, double r);
ExpMoments exp_moments_reference(const Matrix& x, const Vector& theta, double r);

double log_mean_exp(const Matrix& x, const Vector& theta, double r);
double log_mean_exp_reference(const Matrix& x, const Vector& theta, double r);

// z = x * theta
Vector project(const Matrix& x, const Vector& theta);

}  // namespace cgf_outliers::kernels
