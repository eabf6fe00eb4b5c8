#include "ups/evaluable.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ups {
namespace {

double singular_min_of(const VecR& xi, const FieldDescriptor& field, Shape shape) {
  if (field.kind() == FieldKind::complex) return smallest_singular_value(from_coordinates<Complex>(xi, shape));
  return smallest_singular_value(from_coordinates<double>(xi, shape));
}

void require_same_space(const Evaluable& f, const Evaluable& g) {
  if (!(f.field() == g.field()) || !(f.shape() == g.shape())) throw std::invalid_argument("Evaluables on different spaces");
}

}  // namespace

Evaluable::Evaluable(VecFunction fn, FieldDescriptor field, Shape shape, std::optional<Envelope> envelope,
                     std::optional<double> sup_bound)
    : fn_(std::move(fn)), field_(field), shape_(shape), envelope_(std::move(envelope)), sup_(sup_bound) {
  if (!field_.archimedean()) throw std::invalid_argument("Evaluables are archimedean");
}

Complex Evaluable::evaluate(const MatR& x) const {
  if (field_.kind() != FieldKind::real || x.rows() != shape_.rows || x.cols() != shape_.cols) {
    throw std::invalid_argument("evaluate: point is not in the domain space");
  }
  return fn_(to_coordinates<double>(x));
}

Complex Evaluable::evaluate(const MatC& x) const {
  if (field_.kind() != FieldKind::complex || x.rows() != shape_.rows || x.cols() != shape_.cols) {
    throw std::invalid_argument("evaluate: point is not in the domain space");
  }
  return fn_(to_coordinates<Complex>(x));
}

double Evaluable::envelope_violation(const std::vector<VecR>& samples, double slack) const {
  if (!envelope_) throw std::logic_error("no envelope declared");
  if (samples.empty()) return 0.0;
  std::size_t bad = 0;
  for (const auto& xi : samples) {
    const VecR d = xi - envelope_->center;
    const double bound = envelope_->scale * std::exp(-std::numbers::pi * d.dot(envelope_->Q * d));
    if (std::abs(fn_(xi)) > bound * (1 + slack) + 1e-300) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(samples.size());
}

Evaluable operator*(const Evaluable& f, const Evaluable& g) {
  require_same_space(f, g);
  std::optional<Envelope> env;
  if (f.envelope_ && g.sup_) {
    env = *f.envelope_;
    env->scale *= *g.sup_;
  } else if (g.envelope_ && f.sup_) {
    env = *g.envelope_;
    env->scale *= *f.sup_;
  }
  std::optional<double> sup;
  if (f.sup_ && g.sup_) sup = *f.sup_ * *g.sup_;
  auto a = f.fn_, b = g.fn_;
  return Evaluable([a, b](const VecR& xi) { return a(xi) * b(xi); }, f.field_, f.shape_, env, sup);
}

namespace {

std::optional<Envelope> sum_envelope(const std::optional<Envelope>& a, const std::optional<Envelope>& b) {
  if (!a || !b) return std::nullopt;
  if (a->center != b->center) return std::nullopt;
  // both bounded by the weaker Gaussian: Q_min = smaller form in the Loewner order is
  // not available in general, so use the isotropic lower bound of each
  Eigen::SelfAdjointEigenSolver<MatR> ea(a->Q, Eigen::EigenvaluesOnly), eb(b->Q, Eigen::EigenvaluesOnly);
  const double lam = std::min(ea.eigenvalues()(0), eb.eigenvalues()(0));
  Envelope e;
  e.scale = a->scale + b->scale;
  e.Q = lam * MatR::Identity(a->Q.rows(), a->Q.cols());
  e.center = a->center;
  return e;
}

}  // namespace

Evaluable operator-(const Evaluable& f, const Evaluable& g) {
  require_same_space(f, g);
  std::optional<double> sup;
  if (f.sup_ && g.sup_) sup = *f.sup_ + *g.sup_;
  auto a = f.fn_, b = g.fn_;
  return Evaluable([a, b](const VecR& xi) { return a(xi) - b(xi); }, f.field_, f.shape_,
                   sum_envelope(f.envelope_, g.envelope_), sup);
}

Evaluable operator+(const Evaluable& f, const Evaluable& g) {
  require_same_space(f, g);
  std::optional<double> sup;
  if (f.sup_ && g.sup_) sup = *f.sup_ + *g.sup_;
  auto a = f.fn_, b = g.fn_;
  return Evaluable([a, b](const VecR& xi) { return a(xi) + b(xi); }, f.field_, f.shape_,
                   sum_envelope(f.envelope_, g.envelope_), sup);
}

Envelope envelope_of(const GaussianForm& g) {
  // |f| = |kappa| exp(-pi xi^T Q xi - 2 pi Im(ell)^T xi)
  //     = |kappa| e^{pi b^T Q^{-1} b} exp(-pi (xi + Q^{-1} b)^T Q (xi + Q^{-1} b)), b = Im ell
  const VecR b = g.ell().imag();
  Eigen::LLT<MatR> llt(g.Q());
  const VecR s = llt.solve(b);
  Envelope e;
  e.scale = std::abs(g.kappa()) * std::exp(std::numbers::pi * b.dot(s));
  e.Q = g.Q();
  e.center = -s;
  e.frequency = g.ell().real();
  return e;
}

Evaluable to_evaluable(const GaussianForm& g) {
  const Envelope e = envelope_of(g);
  return Evaluable([g](const VecR& xi) { return g.evaluate_coords(xi); }, g.field(), g.shape(), e, e.scale);
}

QuadResult integrate(const Evaluable& f, double rel_tol) {
  if (!f.envelope()) throw std::invalid_argument("integrate: the Evaluable declares no envelope");
  return gauss_hermite_adaptive(f.function(), f.envelope()->Q, f.envelope()->center, rel_tol, 8'000'000,
                                f.envelope()->frequency);
}

CutoffRadii cutoff_radii(int m, CutoffSchedule schedule) {
  if (m < 1) throw std::invalid_argument("cutoff index must be at least 1");
  const double a = m, b = m + 1.0;
  if (schedule == CutoffSchedule::quadratic) return {1.0 / (b * b), 1.0 / (a * a), a, b};
  return {1.0 / b, 1.0 / a, a, b};
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double cutoff_value(double sigma_min, double norm, int m, CutoffSchedule schedule) {
  const CutoffRadii r = cutoff_radii(m, schedule);
  const double inner = smooth_step((sigma_min - r.sigma_zero) / (r.sigma_one - r.sigma_zero));
  const double outer = 1.0 - smooth_step((norm - r.norm_one) / (r.norm_zero - r.norm_one));
  return inner * outer;
}

Evaluable cutoff_chi(int m, FieldDescriptor field, Shape shape, CutoffSchedule schedule) {
  cutoff_radii(m, schedule);
  return Evaluable(
      [m, field, shape, schedule](const VecR& xi) {
        return Complex(cutoff_value(singular_min_of(xi, field, shape), xi.norm(), m, schedule), 0.0);
      },
      field, shape, std::nullopt, 1.0);
}

Evaluable pointwise_mul(const GaussianForm& f, const Evaluable& g) { return to_evaluable(f) * g; }

}  // namespace ups
