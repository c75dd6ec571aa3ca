#pragma once

#include "cgf_outliers/types.hpp"

#include <span>

namespace cgf_outliers {

// Sample covariance (divisor T-1) and its symmetric eigendecomposition.
// Eigenvalues are nonincreasing; column k of `eigenvectors` pairs with
// eigenvalues[k].
struct CovarianceSummary {
  Matrix matrix;
  Vector eigenvalues;
  Matrix eigenvectors;

  double lambda1() const { return eigenvalues[0]; }
  Vector pc1() const { return eigenvectors.col(0); }
};

struct MedianMad {
  double median;
  double mad;
};

struct Cumulants {
  double k1;
  double k2;
  double k3;
  double k4;
};

// Subtracts the column means. The mean vector is returned with the data.
CenteredData center(const DataMatrix& data);

CovarianceSummary covariance_pca(const DataMatrix& data);

// Median uses the mean of the two middle order statistics for even lengths.
// MAD is the raw median of |z - median| (no 1.4826 consistency factor).
MedianMad median_and_mad(std::span<const double> z);
double median(std::span<const double> z);

// Non-excess population kurtosis m4 / m2^2. Throws DegenerateInputError on
// zero variance.
double kurtosis(std::span<const double> z);

// k1 = mean, k2 = m2, k3 = m3, k4 = m4 - 3 m2^2 (population central moments).
Cumulants first_four_cumulants(std::span<const double> z);

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace cgf_outliers
