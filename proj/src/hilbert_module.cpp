#include "ups/hilbert_module.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ups {

template <class S>
fn_t<S> translate_right(const fn_t<S>& f, const Mat<S>& m) {
  return pullback<S>(f, [&m](const Mat<S>& x) { return Mat<S>(x * m); }, f.shape());
}

template <class S>
fn_t<S> translate_left(const fn_t<S>& f, const Mat<S>& m) {
  return pullback<S>(f, [&m](const Mat<S>& y) { return Mat<S>(m * y); }, f.shape());
}

template <class S>
fn_t<S> act_module_X(const fn_t<S>& f, const Mat<S>& a) {
  const int n = degree_of(f.shape());
  return scaled_by<S>(translate_right<S>(f, inverse(a)), det_power<S>(a, field_of<S>(f), Rational(-(n + 1), 2)));
}

template <class S>
fn_t<S> act_module_Xbar(const fn_t<S>& f, const Mat<S>& a) {
  const int n = degree_of(f.shape());
  return scaled_by<S>(translate_left<S>(f, a), det_power<S>(a, field_of<S>(f), Rational(n + 1, 2)));
}

template <class S>
fn_t<S> act_g(const fn_t<S>& f, const Mat<S>& g, Side side) {
  if (side == Side::X) {
    const Mat<S> gi = inverse(g);
    return pullback<S>(f, [&gi](const Mat<S>& x) { return Mat<S>(gi * x); }, f.shape());
  }
  return pullback<S>(f, [&g](const Mat<S>& y) { return Mat<S>(y * g); }, f.shape());
}

template <class S>
val_t<S> l2_inner(const fn_t<S>& f, const fn_t<S>& h) {
  return (f.conj() * h).integral();
}

template <class S>
val_t<S> inner_X_at(const fn_t<S>& f, const fn_t<S>& h, const Mat<S>& a) {
  const int n = degree_of(f.shape());
  return det_power<S>(a, field_of<S>(f), Rational(n + 1, 2)) * l2_inner<S>(f, translate_right<S>(h, a));
}

template <class S>
val_t<S> inner_Xbar_at(const fn_t<S>& f, const fn_t<S>& h, const Mat<S>& a) {
  const int n = degree_of(f.shape());
  return det_power<S>(a, field_of<S>(f), Rational(-(n + 1), 2)) * l2_inner<S>(f, translate_left<S>(h, inverse(a)));
}

template <class S>
LFunction<S> inner_X(const fn_t<S>& f, const fn_t<S>& h) {
  return {[f, h](const Mat<S>& a) { return inner_X_at<S>(f, h, a); }, "inner_X", degree_of(f.shape())};
}

template <class S>
LFunction<S> inner_Xbar(const fn_t<S>& f, const fn_t<S>& h) {
  return {[f, h](const Mat<S>& a) { return inner_Xbar_at<S>(f, h, a); }, "inner_Xbar", degree_of(f.shape())};
}

#define UPS_INSTANTIATE(S)                                                        \
  template fn_t<S> translate_right<S>(const fn_t<S>&, const Mat<S>&);            \
  template fn_t<S> translate_left<S>(const fn_t<S>&, const Mat<S>&);             \
  template fn_t<S> act_module_X<S>(const fn_t<S>&, const Mat<S>&);               \
  template fn_t<S> act_module_Xbar<S>(const fn_t<S>&, const Mat<S>&);            \
  template fn_t<S> act_g<S>(const fn_t<S>&, const Mat<S>&, Side);                \
  template val_t<S> l2_inner<S>(const fn_t<S>&, const fn_t<S>&);                 \
  template val_t<S> inner_X_at<S>(const fn_t<S>&, const fn_t<S>&, const Mat<S>&); \
  template val_t<S> inner_Xbar_at<S>(const fn_t<S>&, const fn_t<S>&, const Mat<S>&); \
  template LFunction<S> inner_X<S>(const fn_t<S>&, const fn_t<S>&);              \
  template LFunction<S> inner_Xbar<S>(const fn_t<S>&, const fn_t<S>&);

UPS_INSTANTIATE(double)
UPS_INSTANTIATE(Complex)
UPS_INSTANTIATE(Rational)
#undef UPS_INSTANTIATE

namespace {

template <class S>
Evaluable act_phi_impl(const GaussianForm& f, const ArchimedeanWeight& phi) {
  const int n = degree_of(f.shape());
  const Shape ashape{n, n};
  const FieldDescriptor fd = f.field();
  if (phi.lo.size() != ashape.entries() * fd.coordinates_per_scalar() || phi.hi.size() != phi.lo.size()) {
    throw std::invalid_argument("act_module_X_phi: weight box has the wrong dimension");
  }
  auto fn = [f, phi, ashape, fd, n](const VecR& xi) {
    const Mat<S> x = from_coordinates<S>(xi, f.shape());
    auto integrand = [&](const VecR& t) -> Complex {
      const Mat<S> a = from_coordinates<S>(t, ashape);
      const double d = abs_det<S>(a, fd);
      if (d == 0.0) return 0.0;
      const Complex w = phi.phi(t);
      if (w == Complex(0.0)) return 0.0;
      return f.evaluate(Mat<S>(x * inverse(a))) * w * std::pow(d, -(n + 1) / 2.0 - n);
    };
    return gauss_legendre_box(integrand, phi.lo, phi.hi, phi.order).value;
  };
  return Evaluable(fn, fd, f.shape());
}

void accumulate_phi(const SBFunction& f, const MatQ& a0, const CyclotomicValue& w, long k, SBFunction& out) {
  const long p = f.prime();
  const int n = degree_of(f.shape());
  const SBFunction h = translate_right<Rational>(f, inverse(a0));
  if (h.terms().empty()) return;
  if (k >= h.constancy_exponent() - h.support_exponent()) {
    // vol^x(a0 K_k) = p^{-k n^2}
    const SBFunction fa = act_module_X<Rational>(f, a0);
    out += fa.scaled(ScaledCyclotomic(w * p_power(p, -k * n * n)));
    return;
  }
  const long cells = static_cast<long>(std::llround(std::pow(static_cast<double>(p), n * n)));
  const Rational step = p_power(p, k);
  for (long idx = 0; idx < cells; ++idx) {
    MatQ eps = MatQ::Identity(n, n);
    long r = idx;
    for (int e = 0; e < n * n; ++e) {
      eps(e % n, e / n) += step * Rational(r % p);
      r /= p;
    }
    accumulate_phi(f, MatQ(a0 * eps), w, k + 1, out);
  }
}

}  // namespace

Evaluable act_module_X_phi(const GaussianForm& f, const ArchimedeanWeight& phi) {
  if (f.field().kind() == FieldKind::complex) return act_phi_impl<Complex>(f, phi);
  return act_phi_impl<double>(f, phi);
}

SBFunction act_module_X_phi(const SBFunction& f, const PadicWeight& phi) {
  SBFunction out(f.prime(), f.shape());
  for (const auto& t : phi) {
    if (t.k < 1) throw std::invalid_argument("act_module_X_phi: cosets need k >= 1");
    if (t.a0.rows() != degree_of(f.shape()) || determinant(t.a0) == 0) {
      throw std::invalid_argument("act_module_X_phi: coset centers must be invertible n x n");
    }
    accumulate_phi(f, t.a0, t.weight, t.k, out);
  }
  return out;
}

double decay_product(const VecR& abs_diag, int n) {
  double out = 1.0;
  for (Eigen::Index i = 0; i < abs_diag.size(); ++i) {
    const double a = abs_diag(i);
    out *= std::pow(std::min(a, 1.0 / a), (n + 1) / 2.0);
  }
  return out;
}

double hc_majorant(const VecR& a_diag, double p_exponent, double C_p, const FieldDescriptor& fd) {
  VecR d = a_diag;
  std::sort(d.data(), d.data() + d.size(), std::greater<>());
  double log_norm = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 0)) throw std::invalid_argument("hc_majorant: diagonal must be positive");
    log_norm += std::log(d(i)) * std::log(d(i));
  }
  return C_p * rho_weight(d, fd) / std::pow(1.0 + std::sqrt(log_norm), p_exponent);
}

double decay_constant(const GaussianForm& f, const GaussianForm& h) {
  if (f.ell().imag().norm() > 0 || h.ell().imag().norm() > 0) {
    throw std::invalid_argument("decay_constant: no centered product envelope (imaginary phase)");
  }
  const double lam = std::min(f.min_eigenvalue(), h.min_eigenvalue());
  return std::abs(f.kappa()) * std::abs(h.kappa()) * std::pow(lam, -f.dim() / 2.0);
}

namespace {

double sb_sup_bound(const SBFunction& f) {
  double m = 0.0;
  for (const auto& t : f.terms()) m += std::abs(t.coeff.to_complex());
  return m * std::pow(static_cast<double>(f.prime()), to_double(f.scale_exponent()));
}

}  // namespace

double decay_constant(const SBFunction& f, const SBFunction& h) {
  const long s = std::min(f.support_exponent(), h.support_exponent());
  return sb_sup_bound(f) * sb_sup_bound(h) * std::pow(static_cast<double>(f.prime()), -static_cast<double>(s) * f.dim());
}

QuadResult truncation_phi(const Evaluable& f, int m, double a, CutoffSchedule schedule, double rel_tol) {
  if (f.field().kind() != FieldKind::real || !(f.shape() == x_shape(1))) {
    throw std::invalid_argument("truncation_phi: implemented for n = 1 over R");
  }
  if (a == 0.0) throw std::invalid_argument("truncation_phi: a must be invertible");
  const double s = std::abs(a);
  const CutoffRadii R = cutoff_radii(m, schedule);
  auto cut = [&](double r) { return 1.0 - cutoff_value(r, r, m, schedule); };

  std::vector<double> br = {0.0};
  for (double r : {R.sigma_zero, R.sigma_one, R.norm_one, R.norm_zero}) {
    br.push_back(r);
    br.push_back(r / s);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  br.push_back(std::numeric_limits<double>::infinity());

  const VecFunction& fn = f.function();
  // periodic in theta, so the trapezoid rule converges geometrically
  auto angular = [&](double r) -> Complex {
    auto g = [&](double th) -> Complex {
      VecR x(2);
      x << r * std::cos(th), r * std::sin(th);
      return std::conj(fn(x)) * fn(VecR(a * x));
    };
    int N = 16;
    Complex sum(0.0, 0.0);
    for (int k = 0; k < N; ++k) sum += g(2 * std::numbers::pi * k / N);
    Complex prev = sum * (2 * std::numbers::pi / N);
    while (N < (1 << 14)) {
      for (int k = 0; k < N; ++k) sum += g(2 * std::numbers::pi * (k + 0.5) / N);
      N *= 2;
      const Complex cur = sum * (2 * std::numbers::pi / N);
      if (std::abs(cur - prev) <= rel_tol * std::abs(cur) || std::abs(cur) < 1e-300) return cur;
      prev = cur;
    }
    return prev;
  };

  auto pieces = [&](double rtol, double atol) {
    QuadResult total;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      const double lo = br[i], hi = br[i + 1];
      const double mid = std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi);
      if (cut(mid) == 0.0 || cut(s * mid) == 0.0) continue;
      auto radial = [&](double r) -> Complex { return r * cut(r) * cut(s * r) * angular(r); };
      const QuadResult q = integrate_1d(radial, lo, hi, rtol, atol);
      total.value += q.value;
      total.error += q.error;
      total.evaluations += q.evaluations;
      total.converged = total.converged && q.converged;
    }
    return total;
  };
  // a coarse pass fixes the absolute scale, so negligible pieces do not
  // have to be resolved to full relative accuracy
  const QuadResult rough = pieces(1e-4, 1e-300);
  QuadResult total = pieces(rel_tol, std::max(1e-300, 0.1 * rel_tol * std::abs(rough.value)));
  total.evaluations += rough.evaluations;
  total.value *= s;
  total.error *= s;
  return total;
}

TruncationReport truncation_sequence(const Evaluable& f, int m_max, const std::vector<double>& a_grid, double tolerance,
                                     CutoffSchedule schedule) {
  if (m_max < 1 || a_grid.empty()) throw std::invalid_argument("truncation_sequence: empty schedule");
  TruncationReport rep;
  rep.tolerance = tolerance;
  const unsigned threads = std::max(1u, quadrature_threads());
  for (int m = 1; m <= m_max; ++m) {
    std::vector<QuadResult> vals(a_grid.size());
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t) {
      jobs.push_back(std::async(std::launch::async, [&, t] {
        for (std::size_t i = t; i < a_grid.size(); i += threads) vals[i] = truncation_phi(f, m, a_grid[i], schedule);
      }));
    }
    for (auto& j : jobs) j.get();
    double sup = 0.0, err = 0.0;
    for (const auto& v : vals) {
      if (std::abs(v.value) >= sup) {
        sup = std::abs(v.value);
        err = v.error;
      }
    }
    rep.m.push_back(m);
    rep.sup.push_back(sup);
    rep.sup_error.push_back(err);
    rep.at_one.push_back(std::abs(truncation_phi(f, m, 1.0, schedule).value));
    if (rep.sup.size() > 1) {
      const double prev = rep.sup[rep.sup.size() - 2];
      if (sup > prev + err + rep.sup_error[rep.sup.size() - 2] + 1e-15) rep.monotone = false;
    }
  }
  rep.below_tolerance = rep.sup.back() < tolerance;
  return rep;
}

std::vector<double> default_real_grid() {
  std::vector<double> g;
  for (int j = -16; j <= 16; ++j) g.push_back(std::pow(2.0, j / 4.0));
  return g;
}

}  // namespace ups
