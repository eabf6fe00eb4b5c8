#pragma once

// Schwartz-Bruhat functions on Q_p^d as exact finite sums
//   f(xi) = p^s * sum_j coeff_j * chi(u_j^T xi) * 1_{c_j + L_j}(xi)
// with cyclotomic coefficients, twist vectors u_j and lattice cosets. The
// twists make the class closed under Fourier transforms, affine pullbacks
// and marginals; plain indicators are the case u = 0.

#include "ups/cyclotomic.hpp"
#include "ups/lattice.hpp"

#include <vector>

namespace ups {

struct SBTerm {
  CyclotomicValue coeff;
  VecQ twist;
  Coset coset;
};

class SBFunction {
 public:
  /// The zero function on Q_p^{shape.entries()}.
  SBFunction(long p, Shape shape);

  static SBFunction indicator(const Coset& coset, Shape shape);
  /// 1_{p^k M(Z_p)} on the given matrix shape.
  static SBFunction ball(long p, Shape shape, long k = 0);

  long prime() const { return p_; }
  int dim() const { return shape_.entries(); }
  const Shape& shape() const { return shape_; }
  const std::vector<SBTerm>& terms() const { return terms_; }
  /// Common factor p^s, s in [0, 1).
  const Rational& scale_exponent() const { return scale_; }

  /// Adds coeff * chi(twist^T xi) * 1_coset (unscaled by p^s).
  void add_term(const CyclotomicValue& coeff, const VecQ& twist, const Coset& coset);

  ScaledCyclotomic evaluate_coords(const VecQ& xi) const;
  ScaledCyclotomic evaluate(const MatQ& x) const;
  /// Exact Haar integral with vol(Z_p^d) = 1.
  ScaledCyclotomic integral() const;

  /// z -> f(A + C z), C injective.
  SBFunction pullback_affine(const VecQ& A, const MatQ& C, Shape shape) const;
  SBFunction pullback_linear(const MatQ& C, Shape shape) const;
  /// Integrates out the coordinates after the first `keep`.
  SBFunction marginal(int keep, Shape shape) const;
  /// Multiplies by chi(freq^T xi).
  SBFunction times_character(const VecQ& freq) const;
  SBFunction scaled(const ScaledCyclotomic& s) const;
  SBFunction scaled(const Rational& s) const;
  SBFunction conj() const;
  /// eta -> int f(xi) chi(sign eta^T P xi) dxi, P invertible.
  SBFunction fourier(const MatQ& P, int sign, Shape out_shape) const;
  /// Folds twists that are constant on their coset, reduces twists modulo
  /// the dual lattice and merges equal terms.
  SBFunction simplified() const;

  /// Sup-norm of the twists' p-adic valuations and lattice radii, used for
  /// local-constancy meshes: f is constant on translates by p^j Z_p^d for
  /// every j >= constancy_exponent().
  long constancy_exponent() const;
  /// Every term's coset lies in p^j Z_p^d for j = support_exponent().
  long support_exponent() const;

  SBFunction& operator+=(const SBFunction& g);
  friend SBFunction operator+(SBFunction f, const SBFunction& g) { return f += g; }
  friend SBFunction operator*(const SBFunction& f, const SBFunction& g);

 private:
  void check_compatible(const SBFunction& g) const;
  /// Moves the integer part of a new total exponent into the coefficients.
  void set_scale(const Rational& s);

  long p_;
  Shape shape_;
  Rational scale_;
  std::vector<SBTerm> terms_;
};

}  // namespace ups
