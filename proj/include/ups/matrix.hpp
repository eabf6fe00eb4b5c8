#pragma once

// Dense matrix aliases templated on the scalar, real-coordinate views of
// matrix spaces, and exact linear algebra over Q.

#include "ups/field.hpp"
#include "ups/rational.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include <complex>
#include <stdexcept>
#include <type_traits>

namespace ups {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using MatR = Mat<double>;
using MatC = Mat<Complex>;
using MatQ = Mat<Rational>;
using VecR = Vec<double>;
using VecC = Vec<Complex>;
using VecQ = Vec<Rational>;

template <class S>
inline constexpr bool is_complex_scalar_v = std::is_same_v<S, Complex>;

/// Coordinate type of a scalar: double for R and C, Rational for Q.
template <class S>
using coord_t = std::conditional_t<std::is_same_v<S, Rational>, Rational, double>;

template <class S>
inline constexpr int coords_per_scalar_v = is_complex_scalar_v<S> ? 2 : 1;

struct Shape {
  int rows = 0;
  int cols = 0;
  int entries() const { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Column-major real coordinates; complex entries contribute (re, im).
template <class S>
Vec<coord_t<S>> to_coordinates(const Mat<S>& x) {
  Vec<coord_t<S>> out(x.size() * coords_per_scalar_v<S>);
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      if constexpr (is_complex_scalar_v<S>) {
        out(k++) = x(r, c).real();
        out(k++) = x(r, c).imag();
      } else {
        out(k++) = x(r, c);
      }
    }
  }
  return out;
}

template <class S>
Mat<S> from_coordinates(const Vec<coord_t<S>>& xi, Shape shape) {
  if (xi.size() != shape.entries() * coords_per_scalar_v<S>) {
    throw std::invalid_argument("coordinate vector does not match shape");
  }
  Mat<S> out(shape.rows, shape.cols);
  Eigen::Index k = 0;
  for (int c = 0; c < shape.cols; ++c) {
    for (int r = 0; r < shape.rows; ++r) {
      if constexpr (is_complex_scalar_v<S>) {
        out(r, c) = Complex(xi(k), xi(k + 1));
        k += 2;
      } else {
        out(r, c) = xi(k++);
      }
    }
  }
  return out;
}

/// Real-coordinate matrix of an R-linear map op: Mat<S>(in) -> Mat<S>(out).
template <class S, class Op>
Mat<coord_t<S>> coordinate_matrix(Op&& op, Shape in, Shape out) {
  const int din = in.entries() * coords_per_scalar_v<S>;
  const int dout = out.entries() * coords_per_scalar_v<S>;
  Mat<coord_t<S>> M(dout, din);
  for (int j = 0; j < din; ++j) {
    Vec<coord_t<S>> e = Vec<coord_t<S>>::Zero(din);
    e(j) = 1;
    const Mat<S> image = op(from_coordinates<S>(e, in));
    if (image.rows() != out.rows || image.cols() != out.cols) {
      throw std::invalid_argument("coordinate_matrix: output shape mismatch");
    }
    M.col(j) = to_coordinates<S>(image);
  }
  return M;
}

// Exact Gaussian elimination over Q.
Rational determinant(const MatQ& a);
MatQ inverse(const MatQ& a);
int rank(const MatQ& a);
/// Solves a x = b for square invertible a.
VecQ solve(const MatQ& a, const VecQ& b);

inline double determinant(const MatR& a) { return a.rows() == 0 ? 1.0 : a.partialPivLu().determinant(); }
inline Complex determinant(const MatC& a) {
  return a.rows() == 0 ? Complex(1.0) : a.partialPivLu().determinant();
}

MatR inverse(const MatR& a);
MatC inverse(const MatC& a);

/// Smallest singular value (0 for empty or wide-deficient inputs).
double smallest_singular_value(const MatR& a);
double smallest_singular_value(const MatC& a);

/// Numeric rank with the given threshold on singular values.
int rank(const MatR& a, double tol);
int rank(const MatC& a, double tol);

inline constexpr double kDefaultRankTolerance = 1e-10;

/// Full column/row rank test: exact over Q, thresholded otherwise.
template <class S>
bool has_full_rank(const Mat<S>& a, double tol = kDefaultRankTolerance) {
  const auto full = std::min(a.rows(), a.cols());
  if constexpr (std::is_same_v<S, Rational>) {
    (void)tol;
    return rank(a) == full;
  } else {
    return rank(a, tol) == full;
  }
}

/// Normalized absolute value of the determinant; |.|_p needs p.
inline double abs_det(const MatR& a) { return abs_norm(determinant(a)); }
inline double abs_det(const MatC& a) { return abs_norm(determinant(a)); }
inline Rational abs_det(const MatQ& a, long p) { return abs_norm(determinant(a), p); }

/// Minimal valuation of the entries of a rational matrix (its sup-norm is
/// p^{-min_valuation}); kInfiniteValuation for the zero matrix.
long min_valuation(const MatQ& a, long p);

MatQ parse_matrix_q(const std::vector<std::vector<std::string>>& rows);

}  // namespace ups
