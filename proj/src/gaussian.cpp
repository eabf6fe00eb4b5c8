#include "ups/gaussian.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ups {
namespace {

constexpr double kPi = std::numbers::pi;

Eigen::LLT<MatR> checked_llt(const MatR& Q) {
  Eigen::LLT<MatR> llt(Q);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("Gaussian form is not positive definite");
  return llt;
}

double sqrt_det(const Eigen::LLT<MatR>& llt) {
  // det Q = prod diag(L)^2
  double log_det = 0.0;
  const MatR L = llt.matrixL();
  for (Eigen::Index i = 0; i < L.rows(); ++i) log_det += std::log(L(i, i));
  return std::exp(log_det);
}

VecC solve_c(const Eigen::LLT<MatR>& llt, const VecC& v) {
  const VecR re = llt.solve(VecR(v.real()));
  const VecR im = llt.solve(VecR(v.imag()));
  VecC out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = Complex(re(i), im(i));
  return out;
}

Complex bilinear(const VecC& a, const VecC& b) { return (a.transpose() * b)(0, 0); }

}  // namespace

GaussianForm::GaussianForm(Complex kappa, MatR Q, VecC ell, FieldDescriptor field, Shape shape)
    : GaussianForm(Scaled{}, kappa == 0.0 ? Complex(0.0) : kappa / std::abs(kappa),
                   kappa == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(kappa)), std::move(Q),
                   std::move(ell), field, shape) {}

GaussianForm::GaussianForm(Scaled, Complex phase, double log_scale, MatR Q, VecC ell, FieldDescriptor field, Shape shape)
    : phase_(phase), log_scale_(log_scale), Q_(std::move(Q)), ell_(std::move(ell)), field_(field), shape_(shape) {
  if (!field_.archimedean()) throw std::invalid_argument("Gaussian forms live over R or C");
  if (Q_.rows() != Q_.cols() || ell_.size() != Q_.rows()) throw std::invalid_argument("Gaussian form: shape mismatch");
  if (shape_.entries() * field_.coordinates_per_scalar() != Q_.rows()) {
    throw std::invalid_argument("Gaussian form: coordinate dimension does not match the matrix shape");
  }
  Q_ = 0.5 * (Q_ + Q_.transpose());
  checked_llt(Q_);
}

GaussianForm::GaussianForm(Complex kappa, MatR Q, FieldDescriptor field, Shape shape)
    : GaussianForm(kappa, Q, VecC::Zero(Q.rows()), field, shape) {}

GaussianForm GaussianForm::rebuilt(Complex e, MatR Q, VecC ell, Shape shape) const {
  if (phase_ == 0.0) return GaussianForm(Scaled{}, 0.0, log_scale_, std::move(Q), std::move(ell), field_, shape);
  return GaussianForm(Scaled{}, phase_ * std::exp(Complex(0.0, e.imag())), log_scale_ + e.real(), std::move(Q),
                      std::move(ell), field_, shape);
}

Complex GaussianForm::kappa() const { return phase_ == 0.0 ? Complex(0.0) : phase_ * std::exp(log_scale_); }

GaussianForm GaussianForm::standard(FieldDescriptor field, Shape shape) {
  const int d = shape.entries() * field.coordinates_per_scalar();
  return GaussianForm(1.0, MatR::Identity(d, d), field, shape);
}

double GaussianForm::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<MatR> es(Q_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Complex GaussianForm::evaluate_coords(const VecR& xi) const {
  if (xi.size() != dim()) throw std::invalid_argument("Gaussian evaluation: dimension mismatch");
  const double quad = xi.dot(Q_ * xi);
  Complex lin(0.0, 0.0);
  for (Eigen::Index i = 0; i < xi.size(); ++i) lin += ell_(i) * xi(i);
  if (phase_ == 0.0) return 0.0;
  return phase_ * std::exp(Complex(log_scale_ - kPi * quad, 0.0) + Complex(0.0, 2.0 * kPi) * lin);
}

Complex GaussianForm::evaluate(const MatR& x) const {
  if (field_.kind() != FieldKind::real || x.rows() != shape_.rows || x.cols() != shape_.cols) {
    throw std::invalid_argument("Gaussian evaluation: point is not in the domain space");
  }
  return evaluate_coords(to_coordinates<double>(x));
}

Complex GaussianForm::evaluate(const MatC& x) const {
  if (field_.kind() != FieldKind::complex || x.rows() != shape_.rows || x.cols() != shape_.cols) {
    throw std::invalid_argument("Gaussian evaluation: point is not in the domain space");
  }
  return evaluate_coords(to_coordinates<Complex>(x));
}

Complex GaussianForm::integral() const {
  const auto llt = checked_llt(Q_);
  const VecC w = solve_c(llt, ell_);
  if (phase_ == 0.0) return 0.0;
  return phase_ / sqrt_det(llt) * std::exp(log_scale_ - kPi * bilinear(ell_, w));
}

GaussianForm GaussianForm::pullback_affine(const VecR& A, const MatR& C, Shape shape) const {
  if (C.rows() != dim() || A.size() != dim()) throw std::invalid_argument("pullback: dimension mismatch");
  if (rank(C, kDefaultRankTolerance) != C.cols()) throw std::invalid_argument("pullback: map is not injective");
  const MatR Qz = C.transpose() * Q_ * C;
  const VecR QA = Q_ * A;
  VecC ellz = C.transpose().cast<Complex>() * ell_;
  ellz += Complex(0.0, 1.0) * (C.transpose() * QA).cast<Complex>();
  Complex lin(0.0, 0.0);
  for (Eigen::Index i = 0; i < A.size(); ++i) lin += ell_(i) * A(i);
  return rebuilt(Complex(-kPi * A.dot(QA), 0.0) + Complex(0.0, 2.0 * kPi) * lin, Qz, ellz, shape);
}

GaussianForm GaussianForm::pullback_linear(const MatR& C, Shape shape) const {
  return pullback_affine(VecR::Zero(dim()), C, shape);
}

GaussianForm GaussianForm::marginal(int keep, Shape shape) const {
  const int d = dim();
  if (keep < 0 || keep > d) throw std::invalid_argument("marginal: bad split");
  if (keep == d) return rebuilt(0.0, Q_, ell_, shape);
  const MatR Qaa = Q_.topLeftCorner(keep, keep);
  const MatR Qaz = Q_.topRightCorner(keep, d - keep);
  const MatR Qzz = Q_.bottomRightCorner(d - keep, d - keep);
  const auto llt = checked_llt(Qzz);
  const VecC ell_a = ell_.head(keep);
  const VecC ell_z = ell_.tail(d - keep);
  const MatR S = llt.solve(MatR(Qaz.transpose()));  // Qzz^{-1} Qza
  const MatR Qm = Qaa - Qaz * S;
  const VecC w = solve_c(llt, ell_z);
  const VecC ellm = ell_a - Qaz.cast<Complex>() * w;
  return rebuilt(-kPi * bilinear(ell_z, w) - std::log(sqrt_det(llt)), Qm, ellm, shape);
}

GaussianForm GaussianForm::times_character(const VecR& freq) const {
  return rebuilt(0.0, Q_, ell_ + freq.cast<Complex>(), shape_);
}

GaussianForm GaussianForm::scaled(Complex s) const {
  if (s == 0.0) return GaussianForm(Scaled{}, 0.0, -std::numeric_limits<double>::infinity(), Q_, ell_, field_, shape_);
  return rebuilt(std::log(s), Q_, ell_, shape_);
}

GaussianForm GaussianForm::conj() const {
  return GaussianForm(Scaled{}, std::conj(phase_), log_scale_, Q_, VecC(-ell_.conjugate()), field_, shape_);
}

GaussianForm operator*(const GaussianForm& f, const GaussianForm& g) {
  if (f.dim() != g.dim() || !(f.field() == g.field())) throw std::invalid_argument("Gaussian product: domain mismatch");
  return GaussianForm(GaussianForm::Scaled{}, f.phase_ * g.phase_, f.log_scale_ + g.log_scale_, f.Q_ + g.Q_, f.ell_ + g.ell_,
                      f.field_, f.shape_);
}

GaussianForm GaussianForm::fourier(const MatR& P, int sign, Shape out_shape) const {
  if (P.cols() != dim() || P.rows() != dim()) throw std::invalid_argument("fourier: pairing matrix mismatch");
  const auto llt = checked_llt(Q_);
  const MatR Qi = llt.solve(MatR::Identity(dim(), dim()));
  const MatR Qf = P * Qi * P.transpose();
  const VecC w = solve_c(llt, ell_);
  const VecC ellf = Complex(0.0, static_cast<double>(sign)) * (P.cast<Complex>() * w);
  return rebuilt(-kPi * bilinear(ell_, w) - std::log(sqrt_det(llt)), Qf, ellf, out_shape);
}

}  // namespace ups
