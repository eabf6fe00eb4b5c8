#pragma once

// Gaussian forms on real coordinate spaces of matrix spaces over R or C:
//   f(xi) = kappa * exp(-pi xi^T Q xi + 2 pi i ell^T xi),
// Q real symmetric positive definite, ell complex. kappa is held as a unit
// phase times exp(log scale), so pullbacks far into the tail keep the
// cancellation between a tiny prefactor and a large completed square. The
// class is closed under
// affine pullback, marginalization, products, characters and Fourier
// transforms, each with an exact closed form.

#include "ups/matrix.hpp"

namespace ups {

class GaussianForm {
 public:
  GaussianForm(Complex kappa, MatR Q, VecC ell, FieldDescriptor field, Shape shape);
  GaussianForm(Complex kappa, MatR Q, FieldDescriptor field, Shape shape);

  /// exp(-pi |xi|^2): self-normalized and self-dual.
  static GaussianForm standard(FieldDescriptor field, Shape shape);

  int dim() const { return static_cast<int>(Q_.rows()); }
  Complex kappa() const;
  /// log |kappa|; -inf for the zero form.
  double log_abs_kappa() const { return log_scale_; }
  /// A branch of log kappa.
  Complex log_kappa() const { return {log_scale_, std::arg(phase_)}; }
  const MatR& Q() const { return Q_; }
  const VecC& ell() const { return ell_; }
  const FieldDescriptor& field() const { return field_; }
  const Shape& shape() const { return shape_; }
  double min_eigenvalue() const;

  Complex evaluate_coords(const VecR& xi) const;
  Complex evaluate(const MatR& x) const;
  Complex evaluate(const MatC& x) const;

  /// Closed form kappa det(Q)^{-1/2} exp(-pi ell^T Q^{-1} ell).
  Complex integral() const;

  /// z -> f(A + C z), C injective (d x k); new coordinates live in `shape`.
  GaussianForm pullback_affine(const VecR& A, const MatR& C, Shape shape) const;
  GaussianForm pullback_linear(const MatR& C, Shape shape) const;
  /// Integrates out the coordinates after the first `keep`.
  GaussianForm marginal(int keep, Shape shape) const;
  /// Multiplies by exp(2 pi i freq^T xi).
  GaussianForm times_character(const VecR& freq) const;
  GaussianForm scaled(Complex s) const;
  GaussianForm conj() const;
  friend GaussianForm operator*(const GaussianForm& f, const GaussianForm& g);

  /// eta -> int f(xi) exp(2 pi i sign eta^T P xi) dxi, for the pairing
  /// matrix P (rows: coordinates of the output space); sign = -1 is the
  /// forward transform.
  GaussianForm fourier(const MatR& P, int sign, Shape out_shape) const;

 private:
  struct Scaled {};
  GaussianForm(Scaled, Complex phase, double log_scale, MatR Q, VecC ell, FieldDescriptor field, Shape shape);
  /// kappa exp(e) in normalized form.
  GaussianForm rebuilt(Complex e, MatR Q, VecC ell, Shape shape) const;

  Complex phase_;
  double log_scale_ = 0.0;
  MatR Q_;
  VecC ell_;
  FieldDescriptor field_;
  Shape shape_;
};

}  // namespace ups
