#pragma once

// Fourier transform X -> Xbar, the slice transform T(f)(y, a), the
// intertwining integral I, the distribution gamma_n and the convolutions
// built from it.
//
//   F f(y)   = int_X f(x) chi(Tr(y x)) dx
//   T f(y,a) = int_{y x = a} f = int f(A a + c z) dz   (fiber of y)
//   I f(y)   = T f(y, I_n)
//   gamma_n(a) = |det a|^{(1-n)/2} chi(Tr a^{-1})

#include "ups/evaluable.hpp"
#include "ups/function_class.hpp"
#include "ups/quadrature.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ups {

/// Coordinate matrix of (y, x) -> Re Tr(y x): rows index Xbar coordinates,
/// columns X coordinates. A signed permutation.
template <class S>
Mat<coord_t<S>> pairing_matrix(int n);

/// Sign of the forward kernel exp(2 pi i sign eta^T P xi): -1 over R and C,
/// +1 over Q_p (where chi(t) = exp(+2 pi i {t})).
template <class S>
constexpr int forward_sign() {
  return std::is_same_v<S, Rational> ? 1 : -1;
}

template <class S>
fn_t<S> fourier(const fn_t<S>& f);
/// Reflected kernel, Xbar -> X.
template <class S>
fn_t<S> inverse_fourier(const fn_t<S>& h);

/// z -> f(A + c z) on F^{1 x n}.
template <class S>
fn_t<S> fiber_restrict(const fn_t<S>& f, const Fiber<S>& fib);

/// Evaluables restrict with the pulled-back envelope.
Evaluable fiber_restrict(const Evaluable& f, const Fiber<double>& fib);
Evaluable fiber_restrict(const Evaluable& f, const Fiber<Complex>& fib);

/// T(f)(y, a) along the given fiber, with the fiber measure scaled by
/// `measure` (1 for the true measure).
template <class S>
val_t<S> slice_transform(const fn_t<S>& f, const Fiber<S>& fib, const Mat<S>& a, const coord_t<S>& measure = coord_t<S>(1));
template <class S>
val_t<S> slice_transform(const fn_t<S>& f, const Mat<S>& y, const Mat<S>& a, const coord_t<S>& measure = coord_t<S>(1));

template <class S>
val_t<S> intertwine_I(const fn_t<S>& f, const Fiber<S>& fib, const coord_t<S>& measure = coord_t<S>(1));
template <class S>
val_t<S> intertwine_I(const fn_t<S>& f, const Mat<S>& y, const coord_t<S>& measure = coord_t<S>(1));

/// a -> T(f)(y, a) as a function on M_n(F), by pulling back along
/// (a, z) -> A a + c z and integrating z out.
template <class S>
fn_t<S> slice_function(const fn_t<S>& f, const Mat<S>& y);

/// int_{M_n} T(f)(y, a) chi(Tr a) da. Exact over Q_p; over R and C the
/// pointwise fiber integrals are integrated in a by adaptive Gauss-Hermite.
/// Beyond kMaxTensorSliceDim real a-coordinates the tensor rule is out of
/// reach and the Gaussian a -> T(f)(y, a) is integrated in closed form.
inline constexpr int kMaxTensorSliceDim = 6;
template <class S>
struct SliceIntegral {
  val_t<S> value;
  double error = 0.0;
  bool converged = true;
  bool closed_form = false;
};
template <class S>
SliceIntegral<S> fourier_slice_rhs(const fn_t<S>& f, const Mat<S>& y, const coord_t<S>& measure = coord_t<S>(1),
                                   double rel_tol = 1e-10);

/// |det a|^{(1-n)/2 + shift} chi(Tr a^{-1}); shift = 0 is gamma_n.
template <class S>
val_t<S> gamma_n(const Mat<S>& a, const FieldDescriptor& fd, const Rational& shift = Rational(0));

/// Both sides of |det a|^{(1-n)/2} gamma_n(a^{-1}) = chi(Tr a). Archimedean
/// sides are compared as modulus and phase (in turns).
struct KernelComparison {
  Complex lhs;
  Complex rhs;
  double error = 0.0;  // |mod_l - mod_r| + 2 pi |turns_l - turns_r|
  bool exact_equal = false;
  std::optional<ScaledCyclotomic> lhs_exact, rhs_exact;  // p-adic only
};
template <class S>
KernelComparison kernel_identity(const Mat<S>& a, const FieldDescriptor& fd, const Rational& shift = Rational(0));

/// int_{M_n} f(x b) chi(Tr b) |det b|^e db for regular x in X. e = 0 is the
/// operational form of C_gamma; e = 1 the weight for which I o C = F.
/// Exact over Q_p (n = 1 for e != 0); closed form over R and C for e = 0.
template <class S>
struct ConvolveResult {
  val_t<S> value;
  double error = 0.0;
};
template <class S>
ConvolveResult<S> convolve_gamma(const fn_t<S>& f, const Mat<S>& x, long e = 0);

/// int_{F} g(b) chi(b)^{with_char} |b|^e db for an SB function g on Q_p.
ScaledCyclotomic weighted_line_integral(const SBFunction& g, long e, bool with_character);

/// Certificate for the shell-by-shell evaluation of I(C f)(y) over Q_p, n = 1.
struct ShellCertificate {
  long base_radius = 0;   // |z| <= p^base_radius handled as one ball
  long onset = 0;         // shells k >= onset follow the law K (1 - 1/p) p^{-k e}
  long last_shell = 0;    // last shell evaluated cell by cell
  std::vector<long> verified;  // shells checked against the law
  ScaledCyclotomic law_constant;
  long weight = 1;
  bool stabilized = false;
  bool divergent = false;
  long cells = 0;
};

struct CompositionResult {
  ScaledCyclotomic value;
  ScaledCyclotomic fourier_value;
  bool conclusive = false;
  bool equal = false;
  ShellCertificate certificate;
  std::vector<ScaledCyclotomic> shells;  // base ball then shells base+1, ...
  /// The printed weight (e = 0): the law constant int f(c b) db; the
  /// composition converges only when it vanishes.
  ScaledCyclotomic printed_law_constant;
  bool printed_converges = false;
  std::string note;
};

CompositionResult compose_shell_stabilized(const SBFunction& f, const MatQ& y, long e = 1, long k_max = 16,
                                           const Rational& measure = Rational(1));

}  // namespace ups
