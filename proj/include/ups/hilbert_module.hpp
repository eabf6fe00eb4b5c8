#pragma once

// Right GL(n)-module structure on functions on X and Xbar, the L-valued
// inner products, the decay majorants and the truncation sequence.
//
//   X side:    f.a(x) = |det a|^{-(n+1)/2} f(x a^{-1}),   g.f(x) = f(g^{-1} x)
//   Xbar side: f.a(y) = |det a|^{(n+1)/2} f(a y),         g.f(y) = f(y g)
//   <f,h>_X(a)    = |det a|^{(n+1)/2}  int conj f(x) h(x a) dx
//   <f,h>_Xbar(a) = |det a|^{-(n+1)/2} int conj f(y) h(a^{-1} y) dy

#include "ups/evaluable.hpp"
#include "ups/function_class.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ups {

/// A function on GL(n, F), known through its values.
template <class S>
struct LFunction {
  std::function<val_t<S>(const Mat<S>&)> eval;
  std::string provenance;
  int n = 0;

  val_t<S> operator()(const Mat<S>& a) const { return eval(a); }
};

/// f^m(x) = f(x m) on X.
template <class S>
fn_t<S> translate_right(const fn_t<S>& f, const Mat<S>& m);
/// ^m f(y) = f(m y) on Xbar.
template <class S>
fn_t<S> translate_left(const fn_t<S>& f, const Mat<S>& m);

template <class S>
fn_t<S> act_module_X(const fn_t<S>& f, const Mat<S>& a);
template <class S>
fn_t<S> act_module_Xbar(const fn_t<S>& f, const Mat<S>& a);

enum class Side { X, Xbar };

/// g.f for g in SL(n+1); on X this is f(g^{-1} x), on Xbar f(y g).
template <class S>
fn_t<S> act_g(const fn_t<S>& f, const Mat<S>& g, Side side);

/// int conj(f) h.
template <class S>
val_t<S> l2_inner(const fn_t<S>& f, const fn_t<S>& h);

template <class S>
val_t<S> inner_X_at(const fn_t<S>& f, const fn_t<S>& h, const Mat<S>& a);
template <class S>
val_t<S> inner_Xbar_at(const fn_t<S>& f, const fn_t<S>& h, const Mat<S>& a);
template <class S>
LFunction<S> inner_X(const fn_t<S>& f, const fn_t<S>& h);
template <class S>
LFunction<S> inner_Xbar(const fn_t<S>& f, const fn_t<S>& h);

/// Compactly supported weight on GL(n, R) or GL(n, C), integrated over a
/// coordinate box of M_n with a tensor Gauss-Legendre rule.
struct ArchimedeanWeight {
  std::function<Complex(const VecR&)> phi;  // in coordinates of M_n(F)
  VecR lo, hi;
  int order = 24;
};

/// f.phi(x) = int f(x a^{-1}) phi(a) |det a|^{-(n+1)/2} dxa, dxa = da / |det a|^n.
Evaluable act_module_X_phi(const GaussianForm& f, const ArchimedeanWeight& phi);

/// phi = sum_i w_i 1_{a_i K_{k_i}}, K_k = 1 + p^k M_n(Z_p), k >= 1.
struct PadicWeightTerm {
  MatQ a0;
  CyclotomicValue weight;
  long k = 1;
};
using PadicWeight = std::vector<PadicWeightTerm>;

/// Exact: cosets are refined until f.a is constant along them.
SBFunction act_module_X_phi(const SBFunction& f, const PadicWeight& phi);

/// C_p e^{-rho(log a)} / (1 + |log a|)^p for a positive diagonal.
double hc_majorant(const VecR& a_diag, double p_exponent, double C_p, const FieldDescriptor& fd);

/// prod_i min(a_i, 1/a_i)^{(n+1)/2} with a_i = |diag_i|_F.
double decay_product(const VecR& abs_diag, int n);

/// Constant C of the bound |<f,h>_X(k1 a k2)| <= C prod min(a_i, 1/a_i)^{(n+1)/2}
/// built from isotropic envelopes |f| <= |kappa| e^{-pi lambda_min |xi|^2};
/// throws std::invalid_argument if a phase has an imaginary part.
double decay_constant(const GaussianForm& f, const GaussianForm& h);
/// p-adic: |f| <= M 1_{p^s Z_p^d} gives C = M_f M_h p^{-s d}.
double decay_constant(const SBFunction& f, const SBFunction& h);

struct TruncationReport {
  std::vector<int> m;
  std::vector<double> sup;        // sup of phi_m over the grid
  std::vector<double> sup_error;  // quadrature error at the maximizer
  std::vector<double> at_one;     // phi_m(1) = |f - f chi_m|^2
  bool monotone = true;
  bool below_tolerance = false;
  double tolerance = 0.0;
};

/// phi_m(a) = <f - f chi_m, f - f chi_m>_X(a) for n = 1 over R, by nested
/// Gauss-Kronrod in polar coordinates split at the cutoff radii.
QuadResult truncation_phi(const Evaluable& f, int m, double a, CutoffSchedule schedule, double rel_tol = 1e-9);

TruncationReport truncation_sequence(const Evaluable& f, int m_max, const std::vector<double>& a_grid, double tolerance,
                                     CutoffSchedule schedule = CutoffSchedule::quadratic);

/// {2^{j/4} : |j| <= 16}.
std::vector<double> default_real_grid();

}  // namespace ups
