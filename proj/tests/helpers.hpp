#pragma once

#include "cgf_outliers/types.hpp"

#include <initializer_list>

namespace test_helpers {

inline cgf_outliers::DataMatrix rows(std::initializer_list<std::initializer_list<double>> r) {
  const auto T = static_cast<Eigen::Index>(r.size());
  const auto n = static_cast<Eigen::Index>(r.begin()->size());
  cgf_outliers::Matrix m(T, n);
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return cgf_outliers::DataMatrix(std::move(m));
}

inline cgf_outliers::Vector vec(std::initializer_list<double> v) {
  cgf_outliers::Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace test_helpers
