#pragma once

// Generic archimedean test functions given by an evaluation rule and a
// Gaussian envelope, the smooth cutoffs chi_m, and products with Gaussians.

#include "ups/gaussian.hpp"
#include "ups/quadrature.hpp"

#include <optional>

namespace ups {

/// |f(xi)| <= scale * exp(-pi (xi - center)^T Q (xi - center)).
struct Envelope {
  double scale = 1.0;
  MatR Q;
  VecR center;
  VecR frequency;  // optional hint for a dominant linear phase
};

class Evaluable {
 public:
  Evaluable(VecFunction fn, FieldDescriptor field, Shape shape, std::optional<Envelope> envelope = std::nullopt,
            std::optional<double> sup_bound = std::nullopt);

  int dim() const { return shape_.entries() * field_.coordinates_per_scalar(); }
  const FieldDescriptor& field() const { return field_; }
  const Shape& shape() const { return shape_; }
  const std::optional<Envelope>& envelope() const { return envelope_; }
  const std::optional<double>& sup_bound() const { return sup_; }

  Complex evaluate_coords(const VecR& xi) const { return fn_(xi); }
  Complex evaluate(const MatR& x) const;
  Complex evaluate(const MatC& x) const;
  const VecFunction& function() const { return fn_; }

  /// Fraction of sample points violating the declared envelope.
  double envelope_violation(const std::vector<VecR>& samples, double slack = 1e-12) const;

  friend Evaluable operator*(const Evaluable& f, const Evaluable& g);
  friend Evaluable operator-(const Evaluable& f, const Evaluable& g);
  friend Evaluable operator+(const Evaluable& f, const Evaluable& g);

 private:
  VecFunction fn_;
  FieldDescriptor field_;
  Shape shape_;
  std::optional<Envelope> envelope_;
  std::optional<double> sup_;
};

/// Exact envelope of a Gaussian form.
Envelope envelope_of(const GaussianForm& g);
Evaluable to_evaluable(const GaussianForm& g);

/// Quadrature integral using the envelope as Gauss-Hermite weight; throws
/// when the envelope is missing.
QuadResult integrate(const Evaluable& f, double rel_tol = 1e-8);

enum class CutoffSchedule {
  quadratic,  // chi_m = 1 on {sigma_min >= 1/m^2, |x| <= m}
  linear,     // chi_m = 1 on {sigma_min >= 1/m,   |x| <= m}
};

struct CutoffRadii {
  double sigma_zero;  // chi_m = 0 for sigma_min <= sigma_zero
  double sigma_one;   // inner factor 1 for sigma_min >= sigma_one
  double norm_one;    // outer factor 1 for |x| <= norm_one
  double norm_zero;   // chi_m = 0 for |x| >= norm_zero
};
CutoffRadii cutoff_radii(int m, CutoffSchedule schedule);

/// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

/// chi_m(x) from sigma_min(x) and the Frobenius norm |x|.
double cutoff_value(double sigma_min, double norm, int m, CutoffSchedule schedule);

Evaluable cutoff_chi(int m, FieldDescriptor field, Shape shape, CutoffSchedule schedule = CutoffSchedule::quadratic);

Evaluable pointwise_mul(const GaussianForm& f, const Evaluable& g);

}  // namespace ups
