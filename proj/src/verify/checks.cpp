#include "ups/verify/checks.hpp"

#include "ups/intertwine.hpp"
#include "ups/random_functions.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ups::verify {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t stream_seed(std::uint64_t seed, const std::string& check, const FieldDescriptor& fd, int n) {
  std::uint64_t h = 1469598103934665603ull;
  auto eat = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  eat(check);
  eat(fd.name());
  eat(std::to_string(n));
  return h ^ (seed * 0x9E3779B97F4A7C15ull);
}

template <class S>
constexpr bool exact_v = std::is_same_v<S, Rational>;

// Field-generic samplers.

template <class S>
Mat<S> sample_matrix(Rng& rng, int r, int c, const FieldDescriptor& fd) {
  if constexpr (std::is_same_v<S, double>) return random_real_matrix(rng, r, c);
  else if constexpr (std::is_same_v<S, Complex>) return random_complex_matrix(rng, r, c);
  else return random_padic_matrix(rng, r, c, fd.prime(), -2, 2);
}

template <class S>
Mat<S> sample_gl(Rng& rng, int n, const FieldDescriptor& fd, double cond = 20.0) {
  if constexpr (std::is_same_v<S, double>) return random_gl_real(rng, n, cond);
  else if constexpr (std::is_same_v<S, Complex>) return random_gl_complex(rng, n, cond);
  else return random_gl_padic(rng, n, fd.prime(), -2, 2);
}

template <class S>
Mat<S> sample_regular(Rng& rng, int n, const FieldDescriptor& fd) {
  if constexpr (std::is_same_v<S, double>) return random_regular_real(rng, n, n + 1);
  else if constexpr (std::is_same_v<S, Complex>) return random_regular_complex(rng, n, n + 1);
  else return random_regular_padic(rng, n, n + 1, fd.prime(), -1, 1);
}

template <class S>
Mat<S> sample_sl(Rng& rng, int n, const FieldDescriptor&) {
  if constexpr (std::is_same_v<S, double>) return random_sl_real(rng, n);
  else if constexpr (std::is_same_v<S, Complex>) return random_sl_complex(rng, n);
  else return random_sl_integral(rng, n);
}

template <class S>
fn_t<S> sample_function(Rng& rng, const FieldDescriptor& fd, Shape shape) {
  if constexpr (exact_v<S>) return random_sb(rng, fd.prime(), shape);
  else return random_gaussian(rng, fd, shape);
}

template <class S>
fn_t<S> standard_function(const FieldDescriptor& fd, Shape shape) {
  if constexpr (exact_v<S>) return SBFunction::ball(fd.prime(), shape);
  else return GaussianForm::standard(fd, shape);
}

template <class S>
Mat<S> first_row_unit(int n) {
  Mat<S> y = Mat<S>::Zero(n, n + 1);
  for (int i = 0; i < n; ++i) y(i, i) = S(1);
  return y;
}

template <class S>
coord_t<S> measure_of(const Rational& factor) {
  if constexpr (exact_v<S>) return factor;
  else return to_double(factor);
}

ScaledCyclotomic exact_value(long p, const Rational& v) { return ScaledCyclotomic(CyclotomicValue::rational(p, v)); }

// Comparisons. Archimedean records carry |lhs - rhs| and pass against
// tol (absolute) or tol * max(|lhs|, |rhs|) (relative).

SampleRecord compare(std::string label, json input, const Complex& lhs, const Complex& rhs, double tol, bool relative) {
  SampleRecord r;
  r.label = std::move(label);
  r.input = std::move(input);
  r.lhs = to_json(lhs);
  r.rhs = to_json(rhs);
  const double err = std::abs(lhs - rhs);
  r.abs_err = err;
  const double scale = relative ? std::max(std::abs(lhs), std::abs(rhs)) : 1.0;
  if (relative) r.extra["rel_err"] = scale > 0 ? err / scale : 0.0;
  r.pass = std::isfinite(err) && err <= tol * scale;
  return r;
}

SampleRecord compare(std::string label, json input, const ScaledCyclotomic& lhs, const ScaledCyclotomic& rhs, double, bool) {
  SampleRecord r;
  r.label = std::move(label);
  r.input = std::move(input);
  r.lhs = to_json(lhs);
  r.rhs = to_json(rhs);
  r.exact_equal = lhs == rhs;
  r.pass = *r.exact_equal;
  return r;
}

template <class S>
json fn_json(const fn_t<S>& f) {
  return to_json(f);
}

void finish(CheckReport& rep) {
  std::size_t failures = 0;
  double max_err = 0.0;
  json first_failure;
  for (const SampleRecord& r : rep.samples) {
    if (r.abs_err) max_err = std::max(max_err, *r.abs_err);
    if (!r.pass) {
      if (failures == 0) first_failure = to_json(r);
      ++failures;
    }
  }
  rep.summary["sample_count"] = rep.samples.size();
  rep.summary["failures"] = failures;
  if (rep.field.archimedean()) rep.summary["max_abs_err"] = max_err;
  if (failures) rep.summary["first_failure"] = first_failure;
  bool extra_ok = true;
  if (rep.summary.contains("conditions")) {
    for (const auto& [k, v] : rep.summary["conditions"].items()) extra_ok = extra_ok && v.get<bool>();
  }
  rep.pass = failures == 0 && extra_ok && !rep.samples.empty();
}

// ---------------------------------------------------------------- checks

template <class S>
void gamma_kernel(const CheckOptions& o, Rng& rng, CheckReport& rep) {
  const FieldDescriptor& fd = o.field;
  const int count = o.samples > 0 ? o.samples : 1000;
  const double tol = o.tol.value_or(1e-12);
  rep.tolerance = exact_v<S> ? 0.0 : tol;
  for (int i = 0; i < count; ++i) {
    const Mat<S> a = i == 0 ? Mat<S>(Mat<S>::Identity(o.n, o.n)) : sample_gl<S>(rng, o.n, fd);
    const KernelComparison kc = kernel_identity<S>(a, fd, o.gamma_shift);
    SampleRecord r;
    r.label = i == 0 ? "identity" : "random";
    r.input = {{"a", to_json(a)}};
    if constexpr (exact_v<S>) {
      r.lhs = to_json(*kc.lhs_exact);
      r.rhs = to_json(*kc.rhs_exact);
      r.exact_equal = kc.exact_equal;
      r.pass = kc.exact_equal;
    } else {
      r.lhs = to_json(kc.lhs);
      r.rhs = to_json(kc.rhs);
      r.abs_err = kc.error;
      r.pass = std::isfinite(kc.error) && kc.error <= tol;
    }
    rep.samples.push_back(std::move(r));
  }
  if (o.gamma_shift != 0) rep.note = "gamma exponent shifted by " + to_string(o.gamma_shift);
}

template <class S>
void slice(const CheckOptions& o, Rng& rng, CheckReport& rep) {
  const FieldDescriptor& fd = o.field;
  const int n = o.n;
  const int count = o.samples > 0 ? o.samples : (n == 1 ? 20 : 5);
  const double tol = o.tol.value_or(n == 1 ? 1e-6 : 1e-4);
  rep.tolerance = exact_v<S> ? 0.0 : tol;
  const coord_t<S> measure = measure_of<S>(o.fiber_factor);
  const double quad_tol = n == 1 ? o.quad_tol : std::max(o.quad_tol, 1e-8);
  for (int i = 0; i < count; ++i) {
    const fn_t<S> f = i == 0 ? standard_function<S>(fd, x_shape(n)) : sample_function<S>(rng, fd, x_shape(n));
    Mat<S> y = i == 0 ? first_row_unit<S>(n) : sample_regular<S>(rng, n, fd);
    // Far from the origin both sides are negligible and the absolute
    // tolerance says nothing; keep the archimedean samples near it.
    if constexpr (!exact_v<S>) {
      if (i > 0) y *= 0.35;
    }
    const val_t<S> lhs = fourier<S>(f).evaluate(y);
    const SliceIntegral<S> rhs = fourier_slice_rhs<S>(f, y, measure, quad_tol);
    SampleRecord r = compare(i == 0 ? "standard" : "random", {{"f", fn_json<S>(f)}, {"y", to_json(y)}}, lhs, rhs.value, tol, false);
    if constexpr (!exact_v<S>) {
      r.extra["quad_error"] = rhs.error;
      r.extra["rel_err"] = *r.abs_err / std::max(std::abs(lhs), 1e-300);
      r.extra["converged"] = rhs.converged;
      r.extra["method"] = rhs.closed_form ? "closed form in a" : "gauss-hermite in a";
      if (i == 0 && fd.kind() == FieldKind::real && n == 1) {
        const double oracle = std::exp(-kPi);
        r.extra["oracle"] = oracle;
        r.pass = r.pass && std::abs(lhs - oracle) <= tol;
      }
    } else {
      if (i == 0 && n == 1) {
        r.extra["oracle"] = "1";
        r.pass = r.pass && lhs == exact_value(fd.prime(), 1);
      }
    }
    rep.samples.push_back(std::move(r));
  }
  if (o.fiber_factor != 1) rep.note = "fiber measure scaled by " + to_string(o.fiber_factor);
}

void composition(const CheckOptions& o, Rng& rng, CheckReport& rep) {
  const long p = o.field.prime();
  const Shape sh = x_shape(1);
  const int count = std::max(o.samples > 0 ? o.samples : 12, 3);
  rep.tolerance = 0.0;
  std::vector<std::pair<SBFunction, MatQ>> cases;
  MatQ y0(1, 2);
  y0 << 1, 0;
  MatQ y1(1, 2);
  y1 << Rational(1, p), 0;
  VecQ c(2);
  c << 1, 0;
  cases.emplace_back(SBFunction::ball(p, sh), y0);
  cases.emplace_back(SBFunction::indicator(Coset(c, Lattice::standard(2, p, 1)), sh), y0);
  cases.emplace_back(SBFunction::ball(p, sh), y1);
  while (static_cast<int>(cases.size()) < count) {
    cases.emplace_back(random_sb(rng, p, sh, 2), random_regular_padic(rng, 1, 2, p, -1, 1));
  }
  int conclusive = 0, fallback = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& [f, y] = cases[i];
    const CompositionResult res = compose_shell_stabilized(f, y, 1, o.k_max, o.fiber_factor);
    const json input = {{"f", to_json(f)}, {"y", to_json(y)}, {"k_max", o.k_max}};
    const std::string label = i < 3 ? "example" : "random";
    if (res.conclusive) {
      ++conclusive;
      SampleRecord r = compare(label, input, res.value, res.fourier_value, 0, false);
      const ShellCertificate& cert = res.certificate;
      json verified = json::array();
      for (long k : cert.verified) verified.push_back(k);
      r.extra["certificate"] = {{"base_radius", cert.base_radius}, {"onset", cert.onset},
                                {"last_shell", cert.last_shell}, {"verified_shells", verified},
                                {"law_constant", to_json(cert.law_constant)}, {"weight", cert.weight},
                                {"stabilized", cert.stabilized}, {"cells", cert.cells}};
      r.extra["printed_weight"] = {{"law_constant", to_json(res.printed_law_constant)},
                                   {"converges", res.printed_converges}};
      rep.samples.push_back(std::move(r));
    } else {
      ++fallback;
      const SliceIntegral<Rational> s = fourier_slice_rhs<Rational>(f, y, o.fiber_factor);
      SampleRecord r = compare(label, input, s.value, fourier<Rational>(f).evaluate(y), 0, false);
      r.extra["fallback"] = "slice";
      r.extra["composition_note"] = res.note;
      rep.samples.push_back(std::move(r));
    }
  }
  rep.summary["conclusive"] = conclusive;
  rep.summary["fallback"] = fallback;
  if (o.fiber_factor != 1) rep.note = "fiber measure scaled by " + to_string(o.fiber_factor);
}

template <class S>
void unitarity(const CheckOptions& o, Rng& rng, CheckReport& rep) {
  const FieldDescriptor& fd = o.field;
  const int n = o.n;
  const double tol = o.tol.value_or(1e-6);
  rep.tolerance = exact_v<S> ? 0.0 : tol;
  const fn_t<S> f = standard_function<S>(fd, x_shape(n));
  const fn_t<S> Ff = fourier<S>(f);
  std::vector<Mat<S>> grid;
  std::vector<std::optional<val_t<S>>> oracle;
  if (n == 1) {
    if constexpr (exact_v<S>) {
      const long p = fd.prime();
      for (long k = -6; k <= 6; ++k) {
        const Rational a = p_power(p, k);
        grid.push_back(MatQ::Constant(1, 1, a));
        oracle.push_back(exact_value(p, p_power(p, -std::abs(k))));
      }
    } else {
      for (double a : default_real_grid()) {
        grid.push_back(Mat<S>::Constant(1, 1, S(a)));
        if (fd.kind() == FieldKind::complex) {
          const double m = a * a;
          oracle.push_back(Complex(m / ((1 + m) * (1 + m)), 0.0));
        } else {
          oracle.push_back(Complex(a / (1 + a * a), 0.0));
        }
      }
    }
  } else {
    grid.push_back(Mat<S>::Identity(n, n));
    oracle.emplace_back();
    for (int i = 0; i < 9; ++i) {
      grid.push_back(sample_gl<S>(rng, n, fd, 4.0));
      oracle.emplace_back();
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Mat<S>& a = grid[i];
    const val_t<S> lhs = inner_Xbar_at<S>(Ff, Ff, a);
    const val_t<S> rhs = inner_X_at<S>(f, f, a);
    SampleRecord r = compare("standard", {{"a", to_json(a)}}, lhs, rhs, tol, false);
    if (oracle[i]) {
      const val_t<S>& o_val = *oracle[i];
      if constexpr (exact_v<S>) {
        r.extra["oracle"] = to_json(o_val);
        r.pass = r.pass && lhs == o_val;
      } else {
        r.extra["oracle"] = to_json(o_val);
        r.pass = r.pass && std::abs(lhs - o_val) <= tol;
      }
    }
    rep.samples.push_back(std::move(r));
  }
  const int pairs = o.samples > 0 ? o.samples : 5;
  for (int i = 0; i < pairs; ++i) {
    const fn_t<S> g = sample_function<S>(rng, fd, x_shape(n));
    const fn_t<S> h = sample_function<S>(rng, fd, x_shape(n));
    const Mat<S> a = sample_gl<S>(rng, n, fd, 4.0);
    const val_t<S> lhs = inner_Xbar_at<S>(fourier<S>(g), fourier<S>(h), a);
    const val_t<S> rhs = inner_X_at<S>(g, h, a);
    rep.samples.push_back(
        compare("random pair", {{"f", fn_json<S>(g)}, {"h", fn_json<S>(h)}, {"a", to_json(a)}}, lhs, rhs, tol, true));
  }
}

template <class S>
void equivariance(const CheckOptions& o, Rng& rng, CheckReport& rep) {
  const FieldDescriptor& fd = o.field;
  const int n = o.n;
  const double tol = o.tol.value_or(1e-8);
  const double tol_I = o.tol.value_or(1e-6);
  rep.tolerance = exact_v<S> ? 0.0 : tol;
  const Rational alpha(o.eq_sign * (n + 1));
  const Shape sh = x_shape(n);

  // Translation law against |det a|^{alpha}; the first cases are the
  // standard form at a = 2, where the right side is 4 exp(-4 pi |y|^2).
  const int triples = o.samples > 0 ? o.samples : 10;
  for (int i = 0; i < triples; ++i) {
    const bool disc = i < 3;
    const fn_t<S> f = disc ? standard_function<S>(fd, sh) : sample_function<S>(rng, fd, sh);
    Mat<S> a = disc ? Mat<S>(Mat<S>::Identity(n, n) * S(2)) : sample_gl<S>(rng, n, fd, 4.0);
    if constexpr (exact_v<S>) {
      if (disc) a = Mat<S>::Identity(n, n) * Rational(fd.prime());
    }
    Mat<S> y;
    if (i == 0) {
      y = first_row_unit<S>(n);
    } else {
      y = sample_matrix<S>(rng, n, n + 1, fd);
      if constexpr (!exact_v<S>) y *= 0.5;
    }
    const val_t<S> lhs = fourier<S>(translate_right<S>(f, inverse(a))).evaluate(y);
    const val_t<S> rhs = fourier<S>(f).evaluate(Mat<S>(a * y)) * det_power<S>(a, fd, alpha);
    SampleRecord r = compare(disc ? "translation (standard, a = 2)" : "translation", {{"f", fn_json<S>(f)}, {"a", to_json(a)}, {"y", to_json(y)}},
                             lhs, rhs, tol, true);
    if constexpr (std::is_same_v<S, double>) {
      if (disc && n == 1) {
        const double oracle = 4.0 * std::exp(-4.0 * kPi * y.squaredNorm());
        r.extra["oracle"] = oracle;
        r.pass = r.pass && std::abs(lhs - oracle) <= tol * oracle;
      }
    }
    rep.samples.push_back(std::move(r));
  }

  for (int i = 0; i < 5; ++i) {
    const fn_t<S> f = sample_function<S>(rng, fd, sh);
    const Mat<S> a = sample_gl<S>(rng, n, fd, 4.0);
    const Mat<S> y = sample_matrix<S>(rng, n, n + 1, fd);
    const val_t<S> lhs = fourier<S>(act_module_X<S>(f, a)).evaluate(y);
    const val_t<S> rhs = act_module_Xbar<S>(fourier<S>(f), a).evaluate(y);
    rep.samples.push_back(compare("module", {{"f", fn_json<S>(f)}, {"a", to_json(a)}, {"y", to_json(y)}}, lhs, rhs, tol, true));
  }

  for (int i = 0; i < 5; ++i) {
    const fn_t<S> f = sample_function<S>(rng, fd, sh);
    const Mat<S> g = sample_sl<S>(rng, n + 1, fd);
    const Mat<S> y = sample_matrix<S>(rng, n, n + 1, fd);
    const val_t<S> lhs = fourier<S>(act_g<S>(f, g, Side::X)).evaluate(y);
    const val_t<S> rhs = fourier<S>(f).evaluate(Mat<S>(y * g));
    rep.samples.push_back(compare("group", {{"f", fn_json<S>(f)}, {"g", to_json(g)}, {"y", to_json(y)}}, lhs, rhs, tol, true));
  }

  for (int i = 0; i < 5; ++i) {
    const fn_t<S> f = sample_function<S>(rng, fd, sh);
    const Mat<S> g = sample_sl<S>(rng, n + 1, fd);
    const Mat<S> y = sample_regular<S>(rng, n, fd);
    const val_t<S> lhs = intertwine_I<S>(act_g<S>(f, g, Side::X), y);
    const val_t<S> rhs = intertwine_I<S>(f, Mat<S>(y * g));
    rep.samples.push_back(compare("intertwiner group", {{"f", fn_json<S>(f)}, {"g", to_json(g)}, {"y", to_json(y)}}, lhs, rhs, tol_I, true));
  }

  for (int i = 0; i < 5; ++i) {
    const fn_t<S> f = sample_function<S>(rng, fd, sh);
    const Mat<S> a = sample_gl<S>(rng, n, fd, 4.0);
    const Mat<S> y = sample_regular<S>(rng, n, fd);
    const val_t<S> lhs = intertwine_I<S>(act_module_X<S>(f, a), y);
    const val_t<S> rhs = intertwine_I<S>(f, Mat<S>(a * y)) * det_power<S>(a, fd, Rational(n + 1, 2));
    rep.samples.push_back(compare("intertwiner module", {{"f", fn_json<S>(f)}, {"a", to_json(a)}, {"y", to_json(y)}}, lhs, rhs, tol_I, true));
  }
  if (o.eq_sign != 1) rep.note = "translation exponent sign flipped";
}

template <class S>
void estimate(const CheckOptions& o, Rng& rng, CheckReport& rep) {
  const FieldDescriptor& fd = o.field;
  const int n = o.n;
  const int count = o.samples > 0 ? o.samples : 1000;
  const fn_t<S> f = standard_function<S>(fd, x_shape(n));
  const double C = decay_constant(f, f);
  rep.summary["C"] = C;
  if constexpr (exact_v<S>) {
    rep.tolerance = 0.0;
    const long p = fd.prime();
    for (int i = 0; i < count; ++i) {
      const MatQ a = i == 0 ? MatQ(MatQ::Identity(n, n)) : random_gl_padic(rng, n, p, -3, 3);
      const KAKFactors<Rational> kk = kak(a, p);
      long total = 0;
      json ms = json::array();
      for (long m : kk.exponents) {
        total += std::abs(m);
        ms.push_back(m);
      }
      const ScaledCyclotomic bound(Rational(-(n + 1) * total, 2), CyclotomicValue::rational(p, Rational(C)));
      SampleRecord r = compare("ball", {{"a", to_json(a)}, {"kak_exponents", ms}}, inner_X_at<Rational>(f, f, a), bound, 0, false);
      rep.samples.push_back(std::move(r));
    }
  } else {
    const double tol = o.tol.value_or(1e-12);
    rep.tolerance = tol;
    const bool cplx = fd.kind() == FieldKind::complex;
    for (int i = 0; i < count; ++i) {
      Mat<S> k1, k2;
      if constexpr (std::is_same_v<S, double>) {
        k1 = random_orthogonal(rng, n);
        k2 = random_orthogonal(rng, n);
      } else {
        k1 = random_unitary(rng, n);
        k2 = random_unitary(rng, n);
      }
      VecR d(n), dF(n);
      for (int j = 0; j < n; ++j) {
        d(j) = std::exp(uniform(rng, -3.0, 3.0));
        dF(j) = cplx ? d(j) * d(j) : d(j);
      }
      Mat<S> D = Mat<S>::Zero(n, n);
      for (int j = 0; j < n; ++j) D(j, j) = S(d(j));
      const Mat<S> a = k1 * D * k2;
      const double lhs = std::abs(inner_X_at<S>(f, f, a));
      const double rhs = C * decay_product(dF, n);
      SampleRecord r;
      r.label = "kak";
      json dj = json::array();
      for (int j = 0; j < n; ++j) dj.push_back(d(j));
      r.input = {{"a", to_json(a)}, {"diag", dj}};
      r.lhs = lhs;
      r.rhs = rhs;
      r.abs_err = std::max(0.0, lhs - rhs);
      r.extra["ratio"] = rhs > 0 ? lhs / rhs : 0.0;
      r.pass = std::isfinite(lhs) && lhs <= rhs * (1 + tol);
      rep.samples.push_back(std::move(r));
    }
  }
}

template <class S>
void rho_chain(const CheckOptions& o, Rng& rng, CheckReport& rep) {
  const FieldDescriptor& fd = o.field;
  const int n = o.n;
  const int count = o.samples > 0 ? o.samples : 1000;
  rep.tolerance = 0.0;
  for (int i = 0; i < count; ++i) {
    std::vector<Rational> r(static_cast<std::size_t>(n));
    std::vector<long> m(static_cast<std::size_t>(n));
    if constexpr (exact_v<S>) {
      for (auto& x : m) x = uniform_int(rng, -6, 6);
      std::sort(m.begin(), m.end());
      for (int j = 0; j < n; ++j) r[j] = Rational(-m[j]);
    } else {
      for (auto& x : r) x = Rational(uniform_int(rng, -32, 32), uniform_int(rng, 1, 8));
      std::sort(r.begin(), r.end(), [](const Rational& a, const Rational& b) { return a > b; });
    }
    const RhoChain ch = rho_chain_exponents(r);
    SampleRecord rec;
    rec.label = "diagonal";
    json rj = json::array();
    for (const Rational& x : r) rj.push_back(to_string(x));
    rec.input = {{"log_exponents", rj}};
    rec.lhs = to_string(ch.product_formula);
    rec.rhs = to_string(ch.rho_functional);
    rec.extra["lower_mid"] = to_string(ch.lower_mid);
    rec.extra["lower_low"] = to_string(ch.lower_low);
    const bool eq = ch.product_formula == ch.rho_functional;
    const bool chain = ch.product_formula >= ch.lower_mid && ch.lower_mid >= ch.lower_low;
    rec.exact_equal = eq;
    bool cross = true;
    if constexpr (exact_v<S>) {
      const Rational w = rho_weight_exponent(m);
      rec.extra["weight_exponent"] = to_string(w);
      cross = w == ch.product_formula;
    } else {
      VecR diag(n);
      const bool cplx = fd.kind() == FieldKind::complex;
      for (int j = 0; j < n; ++j) diag(j) = std::exp(to_double(r[j]) / (cplx ? 2.0 : 1.0));
      const double w = rho_weight(diag, fd);
      const double e = std::exp(to_double(ch.product_formula));
      rec.extra["weight"] = w;
      cross = std::abs(w - e) <= 1e-12 * std::max(w, e);
    }
    rec.extra["chain_holds"] = chain;
    rec.extra["weight_agrees"] = cross;
    rec.pass = eq && chain && cross;
    rep.samples.push_back(std::move(rec));
  }
}

void truncation(const CheckOptions& o, CheckReport& rep) {
  const double tol = o.tol.value_or(1e-3);
  rep.tolerance = tol;
  const Evaluable f = to_evaluable(GaussianForm::standard(FieldDescriptor::real(), x_shape(1)));
  const TruncationReport tr = truncation_sequence(f, o.truncation_m, default_real_grid(), tol, o.schedule);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tr.m.size(); ++i) {
    SampleRecord r;
    r.label = "m";
    r.input = {{"m", tr.m[i]}};
    r.lhs = tr.sup[i];
    r.rhs = prev;
    r.abs_err = tr.sup_error[i];
    r.extra["at_one"] = tr.at_one[i];
    // Nonincreasing up to the quadrature error of both suprema.
    const double slack = tr.sup_error[i] + (i ? tr.sup_error[i - 1] : 0.0);
    r.pass = std::isfinite(tr.sup[i]) && tr.sup[i] <= prev + slack;
    prev = tr.sup[i];
    rep.samples.push_back(std::move(r));
  }
  rep.summary["final_sup"] = tr.sup.empty() ? 0.0 : tr.sup.back();
  rep.summary["conditions"] = {{"monotone", tr.monotone}, {"below_tolerance", tr.below_tolerance}};
  rep.note = "schedule ";
  rep.note += o.schedule == CutoffSchedule::quadratic ? "quadratic" : "linear";
}

template <class S>
void fiber(const CheckOptions& o, Rng& rng, CheckReport& rep) {
  const FieldDescriptor& fd = o.field;
  const int n = o.n;
  const int count = o.samples > 0 ? o.samples : 20;
  const double tol = o.tol.value_or(1e-10);
  rep.tolerance = exact_v<S> ? 0.0 : tol;
  const coord_t<S> measure = measure_of<S>(o.fiber_factor);
  for (int i = 0; i < count; ++i) {
    const fn_t<S> f = sample_function<S>(rng, fd, x_shape(n));
    const Mat<S> y = sample_regular<S>(rng, n, fd);
    const val_t<S> ref = intertwine_I<S>(f, y, measure);
    int done = 0;
    for (int attempt = 0; done < 5 && attempt < 50; ++attempt) {
      Mat<S> w = sample_matrix<S>(rng, 1, n + 1, fd);
      Mat<S> m(n + 1, n + 1);
      m.topRows(n) = y;
      m.row(n) = w;
      if constexpr (exact_v<S>) {
        if (determinant(m) == 0) continue;
      } else {
        if (std::abs(determinant(m)) < 1e-3) continue;
      }
      const val_t<S> alt = intertwine_I<S>(f, fiber_param<S>(y, w), measure);
      rep.samples.push_back(compare("completion", {{"f", fn_json<S>(f)}, {"y", to_json(y)}, {"w", to_json(w)}}, alt, ref, tol, true));
      ++done;
    }
  }
}

template <class F>
void dispatch(const FieldDescriptor& fd, F&& body) {
  switch (fd.kind()) {
    case FieldKind::real: body.template operator()<double>(); break;
    case FieldKind::complex: body.template operator()<Complex>(); break;
    case FieldKind::padic: body.template operator()<Rational>(); break;
  }
}

struct Doc {
  const char* name;
  const char* text;
};

const Doc kDocs[] = {
    {"composition",
     "p-adic composition of the intertwiner with the gamma convolution, n = 1.\n"
     "  Evaluates I(C f)(y) = int_{fiber of y} int f(x b) chi(Tr b) |det b| db dz shell by shell over |z| <= p^k and\n"
     "  compares the stabilized value with F f(y) exactly. A certificate records the base ball, the onset of the\n"
     "  geometric shell law and the verified shells. Cases not certified by k_max fall back to the slice identity.\n"
     "  Inputs: three fixed cases (ball at (1,0), coset (1,0) + pZ^2, ball at (1/p,0)) plus random SB functions.\n"
     "  Tolerance: exact. Negative control: --fiber-factor p."},
    {"equivariance",
     "Equivariance of the Fourier transform and of the intertwiner.\n"
     "  F(f^{a^{-1}})(y) = |det a|^{n+1} F f(a y), with f^{a}(x) = f(x a); at a = 2, n = 1 over R the standard\n"
     "  Gaussian gives 4 exp(-4 pi |y|^2) and rules out the exponent -(n+1).\n"
     "  F(f.a) = F(f).a for the module actions; F(g.f)(y) = F f(y g) for g in SL_{n+1}.\n"
     "  I(g.f)(y) = I f(y g) and I(f.a)(y) = |det a|^{(n+1)/2} I f(a y).\n"
     "  Tolerances: 1e-8 relative for F, 1e-6 relative for I, exact over Q_p. Negative control: --eq-sign -1."},
    {"estimate",
     "Schwartz embedding bound |<f,h>_X(k1 a k2)| <= C prod_i min(|a_i|, |a_i|^{-1})^{(n+1)/2}.\n"
     "  Standard Gaussian with C = |kappa|^2 lambda_min^{-d/2} = 1, at 1000 points k1 diag(e^{t_i}) k2,\n"
     "  t_i uniform in [-3, 3], k1, k2 Haar orthogonal or unitary.\n"
     "  Over Q_p the ball 1_{Z_p^{n(n+1)}} attains equality exactly.\n"
     "  Tolerance: lhs <= rhs (1 + 1e-12); exact equality over Q_p."},
    {"fiber",
     "Independence of I f(y) = int f(A + c z) dz from the completion of y.\n"
     "  For 20 random y, five random rows w with [y; w] invertible define alternative fibers; each value must\n"
     "  agree with the canonical one. Tolerance 1e-10 relative (archimedean), exact over Q_p."},
    {"gamma-kernel",
     "Kernel identity |det a|^{(1-n)/2} gamma_n(a^{-1}) = chi(Tr a), gamma_n(a) = |det a|^{(1-n)/2} chi(Tr a^{-1}).\n"
     "  1000 random invertible a (the first is the identity). Archimedean sides are compared as modulus and\n"
     "  phase in turns: error = |mod_l - mod_r| + 2 pi |turns_l - turns_r|.\n"
     "  Tolerance: 1e-12 (the right side has modulus 1, so this is relative); exact over Q_p.\n"
     "  Negative control: --gamma-shift s adds s to the exponent of gamma_n."},
    {"rho-chain",
     "rho-weight identity and inequalities on log-exponents r_1 >= ... >= r_n of a positive diagonal.\n"
     "  prod_i |a_i|^{i-(n+1)/2} = e^{-rho(log a)}, followed by the two lower bounds of the chain, all in exact\n"
     "  rational arithmetic. The product is cross-checked against the floating weight (1e-12 relative) or the\n"
     "  p-adic weight exponent. 1000 samples.\n"
     "  Tolerance: exact for the chain; 1e-12 relative for the floating cross-check."},
    {"slice",
     "Fourier-slice identity F f(y) = int_{M_n} T(f)(y, a) chi(Tr a) da, T(f)(y, a) = int_{y x = a} f.\n"
     "  The right side integrates the fiber integrals over a by adaptive Gauss-Hermite (closed form per a);\n"
     "  the left side is the closed-form Fourier transform. The first case is the standard form at y = (1, 0),\n"
     "  with oracle e^{-pi} over R. Tolerances: 1e-6 absolute at n = 1, 1e-4 at n >= 2, exact over Q_p.\n"
     "  Negative control: --fiber-factor p."},
    {"truncation",
     "Truncation sequence phi_m(a) = <f - f chi_m, f - f chi_m>_X(a) for the standard Gaussian, n = 1 over R.\n"
     "  sup over the grid {2^{j/4} : |j| <= 16} must be nonincreasing in m (up to quadrature error) and below\n"
     "  the tolerance at m = 20. Cutoff schedule quadratic unless overridden. Tolerance: 1e-3."},
    {"unitarity",
     "Unitarity <F f, F h>_Xbar(a) = <f, h>_X(a).\n"
     "  Standard form on the default grid {2^{j/4}} with oracle |a|/(1 + a^2) over R and m/(1 + m)^2, m = |a|^2,\n"
     "  over C; over Q_p the ball at a = p^k against min(|a|, |a|^{-1}). Random pairs at random a follow.\n"
     "  Tolerance 1e-6 (archimedean), exact over Q_p."},
};

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const Doc& d : kDocs) v.emplace_back(d.name);
    return v;
  }();
  return names;
}

bool is_check(const std::string& name) {
  const auto& v = check_names();
  return std::find(v.begin(), v.end(), name) != v.end();
}

bool applicable(const std::string& name, const FieldDescriptor& fd, int n, std::string* why) {
  auto no = [why](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  if (!is_check(name)) return no("unknown check '" + name + "'");
  if (n < 1) return no("n must be positive");
  if (name == "composition" && (fd.archimedean() || n != 1)) return no("composition is defined over Q_p with n = 1");
  if (name == "truncation" && (fd.kind() != FieldKind::real || n != 1)) return no("truncation is defined over R with n = 1");
  return true;
}

CheckReport run_check(const std::string& name, const CheckOptions& opt) {
  std::string why;
  if (!applicable(name, opt.field, opt.n, &why)) throw ConfigError({why});
  const auto start = std::chrono::steady_clock::now();
  CheckReport rep;
  rep.check = name;
  rep.field = opt.field;
  rep.n = opt.n;
  Rng rng(stream_seed(opt.seed, name, opt.field, opt.n));
  if (name == "gamma-kernel") {
    dispatch(opt.field, [&]<class S>() { gamma_kernel<S>(opt, rng, rep); });
  } else if (name == "slice") {
    dispatch(opt.field, [&]<class S>() { slice<S>(opt, rng, rep); });
  } else if (name == "composition") {
    composition(opt, rng, rep);
  } else if (name == "unitarity") {
    dispatch(opt.field, [&]<class S>() { unitarity<S>(opt, rng, rep); });
  } else if (name == "equivariance") {
    dispatch(opt.field, [&]<class S>() { equivariance<S>(opt, rng, rep); });
  } else if (name == "estimate") {
    dispatch(opt.field, [&]<class S>() { estimate<S>(opt, rng, rep); });
  } else if (name == "rho-chain") {
    dispatch(opt.field, [&]<class S>() { rho_chain<S>(opt, rng, rep); });
  } else if (name == "truncation") {
    truncation(opt, rep);
  } else if (name == "fiber") {
    dispatch(opt.field, [&]<class S>() { fiber<S>(opt, rng, rep); });
  }
  finish(rep);
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string explain_check(const std::string& name) {
  for (const Doc& d : kDocs) {
    if (name == d.name) return std::string(d.name) + ": " + d.text + "\n";
  }
  std::ostringstream os;
  os << "unknown check '" << name << "'; available:";
  for (const auto& c : check_names()) os << ' ' << c;
  os << '\n';
  return os.str();
}

json to_json(const SampleRecord& r) {
  json j = {{"label", r.label}, {"input", r.input}, {"lhs", r.lhs}, {"rhs", r.rhs}};
  if (r.abs_err) j["abs_err"] = *r.abs_err;
  if (r.exact_equal) j["exact_equal"] = *r.exact_equal;
  j["pass"] = r.pass;
  if (!r.extra.is_null()) j["extra"] = r.extra;
  return j;
}

json to_json(const CheckReport& r, bool include_timing) {
  json samples = json::array();
  for (const SampleRecord& s : r.samples) samples.push_back(to_json(s));
  json j = {{"check", r.check}, {"field", r.field.name()}, {"n", r.n}, {"tolerance", r.tolerance}, {"pass", r.pass},
            {"summary", r.summary}, {"samples", samples}};
  if (!r.note.empty()) j["note"] = r.note;
  if (include_timing) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

}  // namespace ups::verify
