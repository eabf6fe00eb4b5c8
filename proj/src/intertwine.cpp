#include "ups/intertwine.hpp"

#include "ups/evaluable.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ups {
namespace {

template <class S>
coord_t<S> real_part(const S& s) {
  if constexpr (is_complex_scalar_v<S>) {
    return s.real();
  } else {
    return s;
  }
}

ScaledCyclotomic rational_value(long p, const Rational& r) { return ScaledCyclotomic(CyclotomicValue::rational(p, r)); }

template <class S>
val_t<S> scale_measure(const val_t<S>& v, const coord_t<S>& measure) {
  if constexpr (std::is_same_v<S, Rational>) {
    if (measure == 1) return v;
    return v * rational_value(v.prime(), measure);
  } else {
    return v * measure;
  }
}

template <class S>
void require_x_side(const fn_t<S>& f, const char* what) {
  const int n = degree_of(f.shape());
  if (!(f.shape() == x_shape(n))) throw std::invalid_argument(std::string(what) + ": expects a function on X");
}

// Long-double inverse and trace, so that Tr((a^{-1})^{-1}) stays within a
// few ulps of Tr(a) for moderately conditioned a.
template <class S>
using wide_t = std::conditional_t<is_complex_scalar_v<S>, std::complex<long double>, long double>;

template <class S>
Mat<S> wide_inverse(const Mat<S>& a) {
  using W = wide_t<S>;
  using MW = Eigen::Matrix<W, Eigen::Dynamic, Eigen::Dynamic>;
  const MW aw = a.template cast<W>();
  const MW inv = aw.partialPivLu().inverse();
  Mat<S> out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = static_cast<S>(inv(i, j));
  }
  return out;
}

template <class S>
S wide_trace_inverse(const Mat<S>& a) {
  using W = wide_t<S>;
  using MW = Eigen::Matrix<W, Eigen::Dynamic, Eigen::Dynamic>;
  const MW aw = a.template cast<W>();
  return static_cast<S>(MW(aw.partialPivLu().inverse()).trace());
}

template <class S>
long double wide_abs_det(const Mat<S>& a) {
  using W = wide_t<S>;
  using MW = Eigen::Matrix<W, Eigen::Dynamic, Eigen::Dynamic>;
  const W d = MW(a.template cast<W>()).partialPivLu().determinant();
  if constexpr (is_complex_scalar_v<S>) {
    return std::norm(d);
  } else {
    return std::fabs(d);
  }
}

double wrapped_turns(double t) {
  double d = t - std::round(t);
  return std::fabs(d);
}

}  // namespace

template <class S>
Mat<coord_t<S>> pairing_matrix(int n) {
  const Shape xs = x_shape(n), ys = xbar_shape(n);
  const int cps = coords_per_scalar_v<S>;
  const int dx = xs.entries() * cps, dy = ys.entries() * cps;
  Mat<coord_t<S>> P(dy, dx);
  for (int k = 0; k < dy; ++k) {
    Vec<coord_t<S>> ek = Vec<coord_t<S>>::Zero(dy);
    ek(k) = 1;
    const Mat<S> Y = from_coordinates<S>(ek, ys);
    for (int l = 0; l < dx; ++l) {
      Vec<coord_t<S>> el = Vec<coord_t<S>>::Zero(dx);
      el(l) = 1;
      const Mat<S> X = from_coordinates<S>(el, xs);
      P(k, l) = real_part<S>(S((Y * X).trace()));
    }
  }
  return P;
}

template <class S>
fn_t<S> fourier(const fn_t<S>& f) {
  require_x_side<S>(f, "fourier");
  const int n = degree_of(f.shape());
  return f.fourier(pairing_matrix<S>(n), forward_sign<S>(), xbar_shape(n));
}

template <class S>
fn_t<S> inverse_fourier(const fn_t<S>& h) {
  const int n = degree_of(h.shape());
  if (!(h.shape() == xbar_shape(n))) throw std::invalid_argument("inverse_fourier: expects a function on Xbar");
  const Mat<coord_t<S>> Pt = pairing_matrix<S>(n).transpose();
  return h.fourier(Pt, -forward_sign<S>(), x_shape(n));
}

template <class S>
fn_t<S> fiber_restrict(const fn_t<S>& f, const Fiber<S>& fib) {
  require_x_side<S>(f, "fiber_restrict");
  const int n = static_cast<int>(fib.A.cols());
  const Mat<S> c = fib.c;
  return pullback_affine<S>(f, fib.A, [&c](const Mat<S>& z) { return Mat<S>(c * z); }, Shape{1, n});
}

template <class S>
val_t<S> slice_transform(const fn_t<S>& f, const Fiber<S>& fib, const Mat<S>& a, const coord_t<S>& measure) {
  require_x_side<S>(f, "slice_transform");
  const int n = static_cast<int>(fib.A.cols());
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("slice_transform: a must be n x n");
  const Mat<S> c = fib.c;
  const fn_t<S> g = pullback_affine<S>(f, Mat<S>(fib.A * a), [&c](const Mat<S>& z) { return Mat<S>(c * z); }, Shape{1, n});
  return scale_measure<S>(g.integral(), measure);
}

template <class S>
val_t<S> slice_transform(const fn_t<S>& f, const Mat<S>& y, const Mat<S>& a, const coord_t<S>& measure) {
  return slice_transform<S>(f, fiber_param<S>(y), a, measure);
}

template <class S>
val_t<S> intertwine_I(const fn_t<S>& f, const Fiber<S>& fib, const coord_t<S>& measure) {
  const auto n = fib.A.cols();
  return slice_transform<S>(f, fib, Mat<S>(Mat<S>::Identity(n, n)), measure);
}

template <class S>
val_t<S> intertwine_I(const fn_t<S>& f, const Mat<S>& y, const coord_t<S>& measure) {
  return intertwine_I<S>(f, fiber_param<S>(y), measure);
}

template <class S>
fn_t<S> slice_function(const fn_t<S>& f, const Mat<S>& y) {
  require_x_side<S>(f, "slice_function");
  const int n = degree_of(f.shape());
  const Fiber<S> fib = fiber_param<S>(y);
  const Mat<S> A = fib.A, c = fib.c;
  const auto Ma = coordinate_matrix<S>([&A](const Mat<S>& a) { return Mat<S>(A * a); }, Shape{n, n}, f.shape());
  const auto Mz = coordinate_matrix<S>([&c](const Mat<S>& z) { return Mat<S>(c * z); }, Shape{1, n}, f.shape());
  Mat<coord_t<S>> M(Ma.rows(), Ma.cols() + Mz.cols());
  M << Ma, Mz;
  const fn_t<S> joint = f.pullback_linear(M, Shape{n + 1, n});
  return joint.marginal(static_cast<int>(Ma.cols()), Shape{n, n});
}

template <class S>
SliceIntegral<S> fourier_slice_rhs(const fn_t<S>& f, const Mat<S>& y, const coord_t<S>& measure, double rel_tol) {
  const int n = degree_of(f.shape());
  const Vec<coord_t<S>> t = trace_coordinates<S>(n);
  if constexpr (std::is_same_v<S, Rational>) {
    (void)rel_tol;
    const SBFunction T = slice_function<S>(f, y);
    return {scale_measure<S>(T.times_character(t).integral(), measure), 0.0, true};
  } else {
    const Fiber<S> fib = fiber_param<S>(y);
    const GaussianForm envelope_source = slice_function<S>(f, y);
    if (envelope_source.dim() > kMaxTensorSliceDim) {
      const Complex v = envelope_source.times_character(VecR(-t)).integral() * measure;
      return {v, 0.0, true, true};
    }
    const Envelope env = envelope_of(envelope_source);
    const Mat<S> A = fib.A, c = fib.c;
    const MatR Ma = coordinate_matrix<S>([&A](const Mat<S>& a) { return Mat<S>(A * a); }, Shape{n, n}, f.shape());
    const MatR Mz = coordinate_matrix<S>([&c](const Mat<S>& z) { return Mat<S>(c * z); }, Shape{1, n}, f.shape());
    // per a, the fiber integral in z is a Gaussian integral:
    //   int exp(-pi z^T Qzz z + 2 pi i m^T z) dz = det(Qzz)^{-1/2} exp(-pi m^T Qzz^{-1} m),
    //   m = Mz^T (ell + i Q Ma a)
    const MatR Qzz = Mz.transpose() * f.Q() * Mz;
    const Eigen::LLT<MatR> llt(Qzz);
    const MatR QMa = f.Q() * Ma;
    const MatR B = Mz.transpose() * QMa;
    const MatR Qaa = Ma.transpose() * QMa;
    const VecC ell_z = Mz.transpose().cast<Complex>() * f.ell();
    const VecC ell_a = Ma.transpose().cast<Complex>() * f.ell();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < Qzz.rows(); ++i) log_det += std::log(MatR(llt.matrixL())(i, i));
    const Complex base = f.log_kappa() - log_det + std::log(Complex(measure));
    const FieldDescriptor fd = f.field();
    auto integrand = [&](const VecR& xi) -> Complex {
      const VecC m = ell_z + Complex(0.0, 1.0) * (B * xi).cast<Complex>();
      VecC w(m.size());
      w.real() = llt.solve(VecR(m.real()));
      w.imag() = llt.solve(VecR(m.imag()));
      const Complex quad = (m.transpose() * w)(0, 0);
      const Complex lin = (ell_a.transpose() * xi.cast<Complex>())(0, 0);
      const Complex e = base - std::numbers::pi * xi.dot(Qaa * xi) + Complex(0.0, 2.0 * std::numbers::pi) * lin - std::numbers::pi * quad;
      const Mat<S> a = from_coordinates<S>(xi, Shape{n, n});
      return std::exp(e) * char_of_trace<S>(a, fd);
    };
    const VecR k = envelope_source.times_character(VecR(-t)).ell().real();
    const QuadResult q = gauss_hermite_adaptive(integrand, env.Q, env.center, rel_tol, 8'000'000, k);
    return {q.value, q.error, q.converged};
  }
}

template <class S>
val_t<S> gamma_n(const Mat<S>& a, const FieldDescriptor& fd, const Rational& shift) {
  const int n = static_cast<int>(a.rows());
  const Rational alpha = Rational(1 - n, 2) + shift;
  if constexpr (std::is_same_v<S, Rational>) {
    return det_power<S>(a, fd, alpha) * ScaledCyclotomic(padic_character(inverse(a).trace(), fd.prime()));
  } else {
    const long double d = wide_abs_det<S>(a);
    if (d == 0) throw std::domain_error("gamma_n: singular matrix");
    return static_cast<double>(std::pow(d, static_cast<long double>(to_double(alpha)))) * add_char(wide_trace_inverse<S>(a));
  }
}

template <class S>
KernelComparison kernel_identity(const Mat<S>& a, const FieldDescriptor& fd, const Rational& shift) {
  const int n = static_cast<int>(a.rows());
  KernelComparison out;
  if constexpr (std::is_same_v<S, Rational>) {
    const ScaledCyclotomic lhs = det_power<S>(a, fd, Rational(1 - n, 2)) * gamma_n<S>(inverse(a), fd, shift);
    const ScaledCyclotomic rhs(padic_character(a.trace(), fd.prime()));
    out.lhs = lhs.to_complex();
    out.rhs = rhs.to_complex();
    out.exact_equal = lhs == rhs;
    out.error = std::abs(out.lhs - out.rhs);
    out.lhs_exact = lhs;
    out.rhs_exact = rhs;
  } else {
    const Mat<S> b = wide_inverse<S>(a);
    const long double da = wide_abs_det<S>(a), db = wide_abs_det<S>(b);
    const long double half = static_cast<long double>(1 - n) / 2;
    const long double mod_l = std::pow(da, half) * std::pow(db, half + static_cast<long double>(to_double(shift)));
    const double turns_l = char_phase_turns(real_part<S>(wide_trace_inverse<S>(b)));
    const double turns_r = char_phase_turns(real_part<S>(S(a.trace())));
    out.lhs = static_cast<double>(mod_l) * std::polar(1.0, 2 * std::numbers::pi * turns_l);
    out.rhs = std::polar(1.0, 2 * std::numbers::pi * turns_r);
    out.error = static_cast<double>(std::fabs(mod_l - 1.0L)) + 2 * std::numbers::pi * wrapped_turns(turns_l - turns_r);
    out.exact_equal = false;
  }
  return out;
}

template <class S>
ConvolveResult<S> convolve_gamma(const fn_t<S>& f, const Mat<S>& x, long e) {
  require_x_side<S>(f, "convolve_gamma");
  const int n = degree_of(f.shape());
  if (x.rows() != n + 1 || x.cols() != n) throw std::invalid_argument("convolve_gamma: x must be (n+1) x n");
  if (!is_regular<S>(x)) throw std::invalid_argument("convolve_gamma: x is rank deficient");
  const fn_t<S> g = pullback<S>(f, [&x](const Mat<S>& b) { return Mat<S>(x * b); }, Shape{n, n});
  const Vec<coord_t<S>> t = trace_coordinates<S>(n);
  if constexpr (std::is_same_v<S, Rational>) {
    if (e == 0) return {g.times_character(t).integral(), 0.0};
    if (n != 1) throw std::invalid_argument("convolve_gamma: weighted p-adic form needs n = 1");
    return {weighted_line_integral(g, e, true), 0.0};
  } else {
    const GaussianForm h = g.times_character(VecR(-t));
    if (e == 0) return {h.integral(), 0.0};
    const FieldDescriptor fd = f.field();
    if (fd.kind() == FieldKind::real && n == 1 && e % 2 != 0) {
      // |b|^e has a kink at 0: integrate each half-line separately
      auto line = [&](double b) -> Complex { return h.evaluate_coords(VecR::Constant(1, b)) * std::pow(std::abs(b), double(e)); };
      const double inf = std::numeric_limits<double>::infinity();
      const QuadResult lo = integrate_1d(line, -inf, 0.0, 1e-12), hi = integrate_1d(line, 0.0, inf, 1e-12);
      return {lo.value + hi.value, lo.error + hi.error};
    }
    const Envelope env = envelope_of(g);
    auto integrand = [&](const VecR& xi) -> Complex {
      const Mat<S> b = from_coordinates<S>(xi, Shape{n, n});
      return h.evaluate_coords(xi) * std::pow(abs_det<S>(b, fd), static_cast<double>(e));
    };
    const QuadResult q = gauss_hermite_adaptive(integrand, env.Q, env.center, 1e-10, 8'000'000, VecR(h.ell().real()));
    return {q.value, q.error};
  }
}

namespace {

template <class S>
Evaluable fiber_restrict_evaluable(const Evaluable& f, const Fiber<S>& fib) {
  const int n = static_cast<int>(fib.A.cols());
  if (!(f.shape() == x_shape(n)) || f.field().coordinates_per_scalar() != coords_per_scalar_v<S>) {
    throw std::invalid_argument("fiber_restrict: expects a function on X over the fiber's field");
  }
  const Mat<S> c = fib.c;
  const MatR Mz = coordinate_matrix<S>([&c](const Mat<S>& z) { return Mat<S>(c * z); }, Shape{1, n}, f.shape());
  const VecR offset = to_coordinates<S>(fib.A);
  std::optional<Envelope> env;
  if (f.envelope()) {
    // the residual of completing the square is nonnegative, so the scale carries over
    const Envelope& e = *f.envelope();
    Envelope z;
    z.scale = e.scale;
    z.Q = Mz.transpose() * e.Q * Mz;
    z.center = -z.Q.ldlt().solve(VecR(Mz.transpose() * e.Q * (offset - e.center)));
    if (e.frequency.size() == Mz.rows()) z.frequency = Mz.transpose() * e.frequency;
    env = z;
  }
  auto fn = f.function();
  return Evaluable([fn, Mz, offset](const VecR& zeta) { return fn(VecR(offset + Mz * zeta)); }, f.field(), Shape{1, n}, env,
                   f.sup_bound());
}

}  // namespace

Evaluable fiber_restrict(const Evaluable& f, const Fiber<double>& fib) { return fiber_restrict_evaluable(f, fib); }
Evaluable fiber_restrict(const Evaluable& f, const Fiber<Complex>& fib) { return fiber_restrict_evaluable(f, fib); }

#define UPS_INSTANTIATE(S)                                                                                    \
  template Mat<coord_t<S>> pairing_matrix<S>(int);                                                            \
  template fn_t<S> fourier<S>(const fn_t<S>&);                                                                \
  template fn_t<S> inverse_fourier<S>(const fn_t<S>&);                                                        \
  template fn_t<S> fiber_restrict<S>(const fn_t<S>&, const Fiber<S>&);                                        \
  template val_t<S> slice_transform<S>(const fn_t<S>&, const Fiber<S>&, const Mat<S>&, const coord_t<S>&);    \
  template val_t<S> slice_transform<S>(const fn_t<S>&, const Mat<S>&, const Mat<S>&, const coord_t<S>&);      \
  template val_t<S> intertwine_I<S>(const fn_t<S>&, const Fiber<S>&, const coord_t<S>&);                      \
  template val_t<S> intertwine_I<S>(const fn_t<S>&, const Mat<S>&, const coord_t<S>&);                        \
  template fn_t<S> slice_function<S>(const fn_t<S>&, const Mat<S>&);                                          \
  template SliceIntegral<S> fourier_slice_rhs<S>(const fn_t<S>&, const Mat<S>&, const coord_t<S>&, double);   \
  template val_t<S> gamma_n<S>(const Mat<S>&, const FieldDescriptor&, const Rational&);                       \
  template KernelComparison kernel_identity<S>(const Mat<S>&, const FieldDescriptor&, const Rational&);       \
  template ConvolveResult<S> convolve_gamma<S>(const fn_t<S>&, const Mat<S>&, long);

UPS_INSTANTIATE(double)
UPS_INSTANTIATE(Complex)
UPS_INSTANTIATE(Rational)
#undef UPS_INSTANTIATE

ScaledCyclotomic weighted_line_integral(const SBFunction& g, long e, bool with_character) {
  const long p = g.prime();
  if (g.dim() != 1) throw std::invalid_argument("weighted_line_integral: expects a function on Q_p");
  if (e < 0) throw std::invalid_argument("weighted_line_integral: negative weights diverge");
  if (g.terms().empty()) return ScaledCyclotomic(p);
  const SBFunction h = with_character ? g.times_character(VecQ::Constant(1, Rational(1))) : g;
  if (h.terms().empty()) return ScaledCyclotomic(p);
  const long j = h.constancy_exponent(), s = h.support_exponent();
  const long k0 = std::max({0L, j, s});
  const Rational q = p_power(p, -(1 + e));
  // h = h(0) on p^{k0} Z_p, where the shells k >= k0 sum to a geometric series.
  ScaledCyclotomic total =
      h.evaluate_coords(VecQ::Zero(1)) * rational_value(p, (1 - Rational(1, p)) * p_power(p, -k0 * (1 + e)) / (1 - q));
  for (long k = s; k < k0; ++k) {
    const SBFunction shell = SBFunction::ball(p, Shape{1, 1}, k) + SBFunction::ball(p, Shape{1, 1}, k + 1).scaled(Rational(-1));
    total += (h * shell).integral() * rational_value(p, p_power(p, -k * e));
  }
  return total;
}

CompositionResult compose_shell_stabilized(const SBFunction& f, const MatQ& y, long e, long k_max, const Rational& measure) {
  const long p = f.prime();
  if (!(f.shape() == x_shape(1)) || y.rows() != 1 || y.cols() != 2) {
    throw std::invalid_argument("compose_shell_stabilized: implemented for n = 1");
  }
  if (e < 0) throw std::invalid_argument("compose_shell_stabilized: negative weight exponent");
  CompositionResult out;
  out.value = ScaledCyclotomic(p);
  out.fourier_value = fourier<Rational>(f).evaluate(y);
  out.certificate.weight = e;
  out.certificate.law_constant = ScaledCyclotomic(p);
  out.printed_law_constant = ScaledCyclotomic(p);
  if (f.terms().empty()) {
    out.conclusive = out.equal = out.printed_converges = true;
    out.certificate.stabilized = true;
    out.note = "zero function";
    return out;
  }

  const Fiber<Rational> fib = fiber_param<Rational>(y);
  const long vy = min_valuation(y, p), vc = min_valuation(fib.c, p), vA = min_valuation(fib.A, p);
  const long j = f.constancy_exponent(), s = f.support_exponent();
  // Cf(x + d) = Cf(x) whenever |d| <= p^mu |x|.
  const long mu = std::min(s - j, -1L);
  const long k0 = std::max(0L, vc - vA);

  auto Cf_at = [&](const Rational& z) {
    MatQ zm(1, 1);
    zm(0, 0) = z;
    return convolve_gamma<Rational>(f, fib.point(zm), e).value;
  };

  // Base ball |z| <= p^{k0}: |x| >= 1/|y| on the fiber, cells of radius p^{mu + vy + vc}.
  const long q = mu + vy + vc;
  const long span = k0 - q;
  const long count = span > 0 ? static_cast<long>(std::llround(std::pow(static_cast<double>(p), span))) : 1;
  const Rational cell_vol = p_power(p, k0) / Rational(count);
  ScaledCyclotomic base(p);
  for (long i = 0; i < count; ++i) base += Cf_at(p_power(p, -k0) * Rational(i));
  base = base * rational_value(p, cell_vol);
  out.shells.push_back(base);
  out.certificate.cells += count;

  const MatQ c = fib.c;
  const SBFunction line = pullback<Rational>(f, [&c](const MatQ& b) { return MatQ(c * b); }, Shape{1, 1});
  const ScaledCyclotomic K = weighted_line_integral(line, e, false);
  out.certificate.law_constant = K;
  out.printed_law_constant = weighted_line_integral(line, 0, false);
  out.printed_converges = out.printed_law_constant.is_zero();

  long onset = std::max({k0 + 1, vc - s});
  if (vA != kInfiniteValuation) onset = std::max(onset, vc - vA - mu);
  out.certificate.base_radius = k0;
  out.certificate.onset = onset;

  auto law = [&](long k) { return K * rational_value(p, (1 - Rational(1, p)) * p_power(p, -k * e)); };

  // Shell |z| = p^k: cells z = p^{-k} u + p^{-(k + mu)} Z_p with u a unit mod p^{-mu}.
  const long units = static_cast<long>(std::llround(std::pow(static_cast<double>(p), -mu)));
  ScaledCyclotomic partial = base;
  const long last = onset + 1;
  if (last > k_max) {
    out.note = "onset beyond k_max; inconclusive";
    out.value = partial * rational_value(p, measure);
    return out;
  }
  for (long k = k0 + 1; k <= last; ++k) {
    ScaledCyclotomic shell(p);
    for (long u = 1; u < units; ++u) {
      if (u % p == 0) continue;
      shell += Cf_at(p_power(p, -k) * Rational(u));
      ++out.certificate.cells;
    }
    shell = shell * rational_value(p, p_power(p, mu + k));
    out.shells.push_back(shell);
    partial += shell;
    if (k >= onset) {
      if (!(shell == law(k))) {
        out.note = "shell " + std::to_string(k) + " deviates from the proven law";
        out.value = partial * rational_value(p, measure);
        return out;
      }
      out.certificate.verified.push_back(k);
    }
  }
  out.certificate.last_shell = last;

  if (e == 0) {
    if (!K.is_zero()) {
      out.certificate.divergent = true;
      out.note = "shells contribute K (1 - 1/p) each; divergent";
      out.value = partial * rational_value(p, measure);
      return out;
    }
    out.certificate.stabilized = true;
  } else {
    const Rational r = p_power(p, -e);
    partial += K * rational_value(p, (1 - Rational(1, p)) * p_power(p, -(last + 1) * e) / (1 - r));
    out.certificate.stabilized = true;
  }
  out.value = partial * rational_value(p, measure);
  out.conclusive = true;
  out.equal = out.value == out.fourier_value;
  return out;
}

}  // namespace ups
