#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace cgf_outliers {

// Rows are observations, columns are variables. Row-major so a row is a
// contiguous span, which is what every CGF kernel streams over.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// T x n observation matrix with optional per-row labels (dates or indices).
struct DataMatrix {
  Matrix values;
  std::vector<std::string> row_labels;

  DataMatrix() = default;
  explicit DataMatrix(Matrix v, std::vector<std::string> labels = {});

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
  bool has_labels() const { return !row_labels.empty(); }

  // Throws ArgumentError unless T >= min_rows, n >= 1, every entry finite and
  // labels (if any) match the row count.
  void validate(std::size_t min_rows = 2) const;

  // Keeps the rows listed in `keep`, in order, labels included.
  DataMatrix select_rows(const std::vector<std::size_t>& keep) const;
};

// Centered data plus the mean that was subtracted.
struct CenteredData {
  DataMatrix data;
  Vector mean;
};

// Unit-norm direction vector theta; xi = r * theta.
class UnitDirection {
 public:
  UnitDirection() = default;
  // Normalizes `v`; throws ArgumentError when v is zero or non-finite.
  explicit UnitDirection(const Vector& v);

  static UnitDirection from_normalized(Vector v);

  const Vector& theta() const { return theta_; }
  std::size_t size() const { return static_cast<std::size_t>(theta_.size()); }
  double operator[](std::size_t i) const { return theta_[static_cast<Eigen::Index>(i)]; }

  double cosine(const UnitDirection& other) const { return theta_.dot(other.theta_); }

 private:
  Vector theta_;
};

}  // namespace cgf_outliers
