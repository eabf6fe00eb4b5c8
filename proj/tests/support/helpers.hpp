#pragma once

#include "ups/random_functions.hpp"

#include <initializer_list>
#include <ostream>

namespace ups {

inline void PrintTo(const ScaledCyclotomic& v, std::ostream* os) {
  *os << v.to_complex() << " [p^" << to_string(v.exponent()) << "]";
}

}  // namespace ups

namespace ups::testing {

inline MatQ q(std::initializer_list<std::initializer_list<Rational>> rows) {
  MatQ m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const auto& x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline MatR r(std::initializer_list<std::initializer_list<double>> rows) {
  MatR m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline VecQ qv(std::initializer_list<Rational> xs) {
  VecQ v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

}  // namespace ups::testing
