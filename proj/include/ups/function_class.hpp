#pragma once

// Dispatch between the two dense function classes: Gaussian forms over R
// and C, exact Schwartz-Bruhat functions over Q_p. Matrices over R, C and Q
// select the class through their scalar type.

#include "ups/gaussian.hpp"
#include "ups/geometry.hpp"
#include "ups/sb_function.hpp"

namespace ups {

template <class S>
struct function_class {
  using type = GaussianForm;
  using value = Complex;
};

template <>
struct function_class<Rational> {
  using type = SBFunction;
  using value = ScaledCyclotomic;
};

template <class S>
using fn_t = typename function_class<S>::type;
template <class S>
using val_t = typename function_class<S>::value;

template <class S>
FieldDescriptor field_of(const fn_t<S>& f) {
  if constexpr (std::is_same_v<S, Rational>) {
    return FieldDescriptor::padic(f.prime());
  } else {
    return f.field();
  }
}

/// The matrix size n of a function on X ((n+1) x n) or Xbar (n x (n+1)).
inline int degree_of(Shape s) { return std::min(s.rows, s.cols); }

template <class S>
val_t<S> evaluate_at(const fn_t<S>& f, const Mat<S>& x) {
  return f.evaluate(x);
}

template <class S>
val_t<S> integral_of(const fn_t<S>& f) {
  return f.integral();
}

/// x -> f(op(x)) for an F-linear op from matrices of shape `in` to f's shape.
template <class S, class Op>
fn_t<S> pullback(const fn_t<S>& f, Op&& op, Shape in) {
  return f.pullback_linear(coordinate_matrix<S>(std::forward<Op>(op), in, f.shape()), in);
}

/// z -> f(offset + op(z)).
template <class S, class Op>
fn_t<S> pullback_affine(const fn_t<S>& f, const Mat<S>& offset, Op&& op, Shape in) {
  return f.pullback_affine(to_coordinates<S>(offset), coordinate_matrix<S>(std::forward<Op>(op), in, f.shape()), in);
}

/// |det a|_F^alpha as a value of the function class.
template <class S>
val_t<S> det_power(const Mat<S>& a, const FieldDescriptor& fd, const Rational& alpha) {
  if constexpr (std::is_same_v<S, Rational>) {
    const long v = valuation(determinant(a), fd.prime());
    if (v == kInfiniteValuation) throw std::domain_error("det_power: singular matrix");
    // |det a|_p = p^{-v}
    return ScaledCyclotomic(Rational(-v) * alpha, CyclotomicValue::rational(fd.prime(), 1));
  } else {
    const double d = abs_det<S>(a, fd);
    if (d == 0.0) throw std::domain_error("det_power: singular matrix");
    return Complex(std::pow(d, to_double(alpha)), 0.0);
  }
}

template <class S>
fn_t<S> scaled_by(const fn_t<S>& f, const val_t<S>& s) {
  return f.scaled(s);
}

/// The additive character at Tr(a): complex for R and C, exact over Q_p.
template <class S>
val_t<S> char_of_trace(const Mat<S>& a, const FieldDescriptor& fd) {
  if constexpr (std::is_same_v<S, Rational>) {
    return ScaledCyclotomic(padic_character(a.trace(), fd.prime()));
  } else {
    (void)fd;
    return add_char(a.trace());
  }
}

/// Coordinates t with t^T coords(a) = Re Tr(a) (and Tr(a) over Q_p).
template <class S>
Vec<coord_t<S>> trace_coordinates(int n) {
  return to_coordinates<S>(Mat<S>(Mat<S>::Identity(n, n)));
}

/// Turns a class value into a complex number (exact values are rounded).
inline Complex to_complex_value(const Complex& v) { return v; }
inline Complex to_complex_value(const ScaledCyclotomic& v) { return v.to_complex(); }

}  // namespace ups
