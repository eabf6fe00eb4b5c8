#pragma once

// Numerical integration: Gauss-Hermite tensor rules after whitening by a
// Gaussian envelope, Gauss-Legendre box rules, and adaptive Gauss-Kronrod
// for one-dimensional complex integrands. Reductions use a fixed pairwise
// tree, so results do not depend on the thread count.

#include "ups/matrix.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace ups {

struct QuadResult {
  Complex value{0.0, 0.0};
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights for int g(t) e^{-t^2} dt (Golub-Welsch).
const Rule1D& gauss_hermite_rule(int order);
/// Nodes and weights on [-1, 1].
const Rule1D& gauss_legendre_rule(int order);

/// Pairwise sum over a fixed binary tree.
Complex pairwise_sum(const std::vector<Complex>& v);
double pairwise_sum(const std::vector<double>& v);

/// Threads used by tensor quadrature (env UPS_THREADS, default hardware).
unsigned quadrature_threads();

using VecFunction = std::function<Complex(const VecR&)>;
using ScalarFunction = std::function<Complex(double)>;

/// int f(xi) dxi for f with envelope ~ exp(-pi (xi - c)^T Q (xi - c)),
/// by a tensor Gauss-Hermite rule of the given order per axis.
QuadResult gauss_hermite_integrate(const VecFunction& f, const MatR& Q, const VecR& center, int order);

/// Raises the order until two successive estimates agree to rel_tol times
/// the integral of |f| (or the node budget is exhausted, which is reported
/// as non-convergence).
/// An optional frequency k hints at a dominant phase exp(2 pi i k.xi); the
/// rule is then rotated so that this phase varies along one axis only.
QuadResult gauss_hermite_adaptive(const VecFunction& f, const MatR& Q, const VecR& center, double rel_tol,
                                  std::size_t max_nodes = 8'000'000, const VecR& frequency = VecR());

/// Tensor Gauss-Legendre over the box [lo, hi].
QuadResult gauss_legendre_box(const VecFunction& f, const VecR& lo, const VecR& hi, int order);

/// Adaptive Gauss-Kronrod (15 points) on [a, b]; infinite ends allowed.
QuadResult integrate_1d(const ScalarFunction& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                        unsigned max_depth = 18);

/// Same, split at the given sorted breakpoints (which may include +-inf at
/// the ends).
QuadResult integrate_1d_pieces(const ScalarFunction& f, const std::vector<double>& breaks, double rel_tol,
                               double abs_tol = 0.0, unsigned max_depth = 18);

}  // namespace ups
