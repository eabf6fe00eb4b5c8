#include "ups/hilbert_module.hpp"
#include "ups/intertwine.hpp"
#include "../support/helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ups;
using namespace ups::testing;

namespace {

ScaledCyclotomic exact(long p, const Rational& v) { return ScaledCyclotomic(CyclotomicValue::rational(p, v)); }

Rational padic_min(const Rational& a, long p) {
  const Rational v = abs_norm(a, p);
  return v < 1 ? v : Rational(1) / v;
}

GaussianForm std_x(int n, FieldDescriptor fd = FieldDescriptor::real()) { return GaussianForm::standard(fd, x_shape(n)); }

}  // namespace

TEST(InnerX, RealGaussianOracle) {
  const GaussianForm f = std_x(1);
  const LFunction<double> ip = inner_X<double>(f, f);
  for (double a : {-3.0, -0.5, 0.125, 0.7, 1.0, 2.0, 9.0}) {
    const double oracle = std::abs(a) / (1 + a * a);
    EXPECT_LT(std::abs(ip(r({{a}})) - oracle), 1e-14) << a;
  }
  EXPECT_GT(ip(r({{1.0}})).real(), 0.0);
  EXPECT_LT(std::abs(ip(r({{1.0}})) - l2_inner<double>(f, f)), 1e-15);
}

TEST(InnerX, ComplexGaussianOracle) {
  const GaussianForm f = std_x(1, FieldDescriptor::complex());
  for (Complex a : {Complex(0.3, 0.4), Complex(2.0, -1.0), Complex(1.0, 0.0)}) {
    MatC am(1, 1);
    am << a;
    const double m = std::norm(a);
    EXPECT_LT(std::abs(inner_X_at<Complex>(f, f, am) - m / ((1 + m) * (1 + m))), 1e-14);
  }
}

TEST(InnerX, PadicBallOracle) {
  for (long p : {2L, 3L, 5L}) {
    const SBFunction f = SBFunction::ball(p, x_shape(1));
    const SBFunction fb = SBFunction::ball(p, xbar_shape(1));
    for (long k = -3; k <= 3; ++k) {
      for (long u : {1L, p - 1, p + 1}) {
        const Rational a = p_power(p, k) * Rational(u);
        EXPECT_EQ(inner_X_at<Rational>(f, f, q({{a}})), exact(p, padic_min(a, p))) << p << " " << k;
        EXPECT_EQ(inner_Xbar_at<Rational>(fb, fb, q({{a}})), exact(p, padic_min(a, p)));
      }
    }
  }
}

TEST(InnerXbar, RealGaussianOracle) {
  const GaussianForm f = GaussianForm::standard(FieldDescriptor::real(), xbar_shape(1));
  for (double a : {-2.0, 0.25, 1.0, 3.0}) {
    EXPECT_LT(std::abs(inner_Xbar_at<double>(f, f, r({{a}})) - std::abs(a) / (1 + a * a)), 1e-14);
  }
  EXPECT_GT(inner_Xbar_at<double>(f, f, r({{1.0}})).real(), 0.0);
}

TEST(ModuleAction, Examples) {
  const FieldDescriptor R = FieldDescriptor::real();
  Rng rng(31);
  const GaussianForm f = random_gaussian(rng, R, x_shape(1));
  const GaussianForm fI = act_module_X<double>(f, MatR::Identity(1, 1));
  EXPECT_LT(std::abs(fI.kappa() - f.kappa()), 1e-15);
  const GaussianForm f2 = act_module_X<double>(f, r({{2.0}}));
  EXPECT_LT(std::abs(f2.kappa() - f.kappa() / 2.0), 1e-15);
  EXPECT_LT((f2.Q() - f.Q() / 4.0).norm(), 1e-15);

  const GaussianForm h = random_gaussian(rng, R, xbar_shape(1));
  const GaussianForm h2 = act_module_Xbar<double>(h, r({{2.0}}));
  EXPECT_LT(std::abs(h2.kappa() - h.kappa() * 2.0), 1e-14);
  EXPECT_LT((h2.Q() - h.Q() * 4.0).norm(), 1e-13);
  const GaussianForm hI = act_module_Xbar<double>(h, MatR::Identity(1, 1));
  EXPECT_LT((hI.Q() - h.Q()).norm(), 1e-15);
}

TEST(ModuleAction, ActionLaw) {
  Rng rng(32);
  const FieldDescriptor R = FieldDescriptor::real();
  for (int n = 1; n <= 2; ++n) {
    const GaussianForm f = random_gaussian(rng, R, x_shape(n));
    const GaussianForm h = random_gaussian(rng, R, xbar_shape(n));
    for (int t = 0; t < 5; ++t) {
      const MatR a = random_gl_real(rng, n, 4.0), b = random_gl_real(rng, n, 4.0);
      const GaussianForm l = act_module_X<double>(act_module_X<double>(f, a), b);
      const GaussianForm rr = act_module_X<double>(f, MatR(a * b));
      const GaussianForm lb = act_module_Xbar<double>(act_module_Xbar<double>(h, a), b);
      const GaussianForm rb = act_module_Xbar<double>(h, MatR(a * b));
      for (int s = 0; s < 4; ++s) {
        const MatR x = random_real_matrix(rng, n + 1, n), y = random_real_matrix(rng, n, n + 1);
        EXPECT_LT(std::abs(l.evaluate(x) - rr.evaluate(x)), 1e-10);
        EXPECT_LT(std::abs(lb.evaluate(y) - rb.evaluate(y)), 1e-10);
      }
    }
  }
  for (long p : {2L, 3L}) {
    const SBFunction f = random_sb(rng, p, x_shape(1));
    const MatQ a = random_gl_padic(rng, 1, p, -1, 1), b = random_gl_padic(rng, 1, p, -1, 1);
    const SBFunction l = act_module_X<Rational>(act_module_X<Rational>(f, a), b);
    const SBFunction rr = act_module_X<Rational>(f, MatQ(a * b));
    for (int s = 0; s < 30; ++s) {
      const MatQ x = random_padic_matrix(rng, 2, 1, p, -2, 2);
      EXPECT_EQ(l.evaluate(x), rr.evaluate(x));
    }
  }
}

TEST(ModuleAction, GroupAction) {
  Rng rng(33);
  const FieldDescriptor R = FieldDescriptor::real();
  const int n = 1;
  const GaussianForm f = random_gaussian(rng, R, x_shape(n)), h = random_gaussian(rng, R, x_shape(n));
  const MatR g = random_sl_real(rng, n + 1), k = random_sl_real(rng, n + 1);
  const GaussianForm gk = act_g<double>(f, MatR(g * k), Side::X);
  const GaussianForm g_k = act_g<double>(act_g<double>(f, k, Side::X), g, Side::X);
  const GaussianForm id = act_g<double>(f, MatR::Identity(n + 1, n + 1), Side::X);
  for (int s = 0; s < 5; ++s) {
    const MatR x = random_real_matrix(rng, n + 1, n);
    EXPECT_LT(std::abs(gk.evaluate(x) - g_k.evaluate(x)), 1e-10);
    EXPECT_LT(std::abs(id.evaluate(x) - f.evaluate(x)), 1e-15);
  }
  const GaussianForm hb = random_gaussian(rng, R, xbar_shape(n));
  const GaussianForm bgk = act_g<double>(hb, MatR(g * k), Side::Xbar);
  const GaussianForm bg_k = act_g<double>(act_g<double>(hb, k, Side::Xbar), g, Side::Xbar);
  for (int s = 0; s < 5; ++s) {
    const MatR y = random_real_matrix(rng, n, n + 1);
    EXPECT_LT(std::abs(bgk.evaluate(y) - bg_k.evaluate(y)), 1e-10);
  }
  // G-invariance of the inner product; one side also by quadrature
  const GaussianForm gf = act_g<double>(f, g, Side::X), gh = act_g<double>(h, g, Side::X);
  for (double a : {0.5, 1.0, -1.7}) {
    const MatR am = r({{a}});
    EXPECT_LT(std::abs(inner_X_at<double>(gf, gh, am) - inner_X_at<double>(f, h, am)), 1e-10);
    const GaussianForm prod = gf.conj() * translate_right<double>(gh, am);
    const QuadResult qr = integrate(to_evaluable(prod), 1e-10);
    EXPECT_LT(std::abs(qr.value * std::abs(a) - inner_X_at<double>(f, h, am)), 1e-8);
  }
}

TEST(ModuleAction, PhiApproximateIdentityPadic) {
  Rng rng(34);
  for (long p : {2L, 3L}) {
    const SBFunction f = random_sb(rng, p, x_shape(1));
    // phi = 1_{K_k} / vol(K_k) with K_k inside the stabilizer: f.phi = f
    const long k = std::max(1L, f.constancy_exponent() - f.support_exponent());
    const PadicWeight phi = {{MatQ::Identity(1, 1), CyclotomicValue::rational(p, p_power(p, k)), k}};
    const SBFunction fp = act_module_X_phi(f, phi);
    // smeared point mass at a0
    const MatQ a0 = q({{Rational(p)}});
    const PadicWeight phi0 = {{a0, CyclotomicValue::rational(p, 2 * p_power(p, k)), k}};
    const SBFunction fa = act_module_X_phi(f, phi0);
    const SBFunction ref = act_module_X<Rational>(f, a0);
    // linearity
    PadicWeight both = phi;
    both.push_back(phi0[0]);
    const SBFunction fb = act_module_X_phi(f, both);
    // a coarser coset averages f over K_1 \ K_k instead
    const PadicWeight coarse = {{MatQ::Identity(1, 1), CyclotomicValue::rational(p, Rational(p)), 1}};
    const SBFunction fc = act_module_X_phi(f, coarse);
    for (int s = 0; s < 40; ++s) {
      const MatQ x = random_padic_matrix(rng, 2, 1, p, -2, 2);
      EXPECT_EQ(fp.evaluate(x), f.evaluate(x));
      ScaledCyclotomic avg(p);
      const long cells = std::lround(std::pow(static_cast<double>(p), static_cast<double>(k - 1)));
      for (long u = 0; u < cells; ++u) {
        const MatQ a = q({{Rational(1) + Rational(p) * Rational(u)}});
        avg += act_module_X<Rational>(f, a).evaluate(x) * exact(p, Rational(1, cells));
      }
      EXPECT_EQ(fc.evaluate(x), avg);
      EXPECT_EQ(fa.evaluate(x), ref.evaluate(x) * exact(p, 2));
      EXPECT_EQ(fb.evaluate(x), fp.evaluate(x) + fa.evaluate(x));
    }
  }
}

TEST(ModuleAction, PhiApproximateIdentityReal) {
  const GaussianForm f = std_x(1);
  auto bump = [](double c, double w) {
    return [c, w](const VecR& t) -> Complex {
      const double u = (t(0) - c) / w;
      return std::abs(u) < 1 ? std::exp(-1.0 / (1 - u * u)) : 0.0;
    };
  };
  double prev = 1e9;
  for (double w : {0.2, 0.05, 0.01}) {
    ArchimedeanWeight phi{bump(1.0, w), VecR::Constant(1, 1.0 - w), VecR::Constant(1, 1.0 + w), 40};
    // normalize to unit Haar mass
    const QuadResult mass = gauss_legendre_box([&](const VecR& t) { return phi.phi(t) / std::abs(t(0)); }, phi.lo, phi.hi, 40);
    const auto raw = phi.phi;
    phi.phi = [raw, mass](const VecR& t) { return raw(t) / mass.value; };
    const Evaluable fp = act_module_X_phi(f, phi);
    double err = 0;
    for (double x1 : {0.0, 0.4, 1.1}) {
      const MatR x = r({{x1}, {0.3}});
      err = std::max(err, std::abs(fp.evaluate(x) - f.evaluate(x)));
    }
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);

  // smeared point mass at a0 = 2 against f.a0 times the mass
  const double w = 0.01;
  ArchimedeanWeight phi{bump(2.0, w), VecR::Constant(1, 2.0 - w), VecR::Constant(1, 2.0 + w), 40};
  const QuadResult mass = gauss_legendre_box([&](const VecR& t) { return phi.phi(t) / std::abs(t(0)); }, phi.lo, phi.hi, 40);
  const Evaluable fp = act_module_X_phi(f, phi);
  const GaussianForm fa = act_module_X<double>(f, r({{2.0}}));
  const MatR x = r({{0.5}, {-0.2}});
  EXPECT_LT(std::abs(fp.evaluate(x) - fa.evaluate(x) * mass.value), 1e-4 * std::abs(mass.value));
}

TEST(InnerProduct, ModuleProperty) {
  Rng rng(35);
  const FieldDescriptor R = FieldDescriptor::real();
  for (int n = 1; n <= 2; ++n) {
    const GaussianForm f = random_gaussian(rng, R, x_shape(n)), h = random_gaussian(rng, R, x_shape(n));
    for (int t = 0; t < 5; ++t) {
      const MatR a = random_gl_real(rng, n, 3.0), b = random_gl_real(rng, n, 3.0);
      const Complex lhs = inner_X_at<double>(f, act_module_X<double>(h, a), b);
      const double da = abs_det<double>(a, R), db = abs_det<double>(b, R);
      const Complex literal = std::pow(da, -(n + 1) / 2.0) * std::pow(db, (n + 1) / 2.0) *
                              l2_inner<double>(f, translate_right<double>(h, MatR(b * inverse(a))));
      EXPECT_LT(std::abs(lhs - literal), 1e-8);
      EXPECT_LT(std::abs(lhs - inner_X_at<double>(f, h, MatR(b * inverse(a)))), 1e-8);
    }
  }
}

TEST(InnerProduct, HermitianSymmetryAndPositivity) {
  Rng rng(36);
  const FieldDescriptor R = FieldDescriptor::real();
  for (int n = 1; n <= 2; ++n) {
    const GaussianForm f = random_gaussian(rng, R, x_shape(n)), h = random_gaussian(rng, R, x_shape(n));
    for (int t = 0; t < 5; ++t) {
      const MatR a = random_gl_real(rng, n, 3.0);
      EXPECT_LT(std::abs(inner_X_at<double>(f, h, a) - std::conj(inner_X_at<double>(h, f, inverse(a)))), 1e-10);
    }
    const Complex ff = inner_X_at<double>(f, f, MatR::Identity(n, n));
    EXPECT_GE(ff.real(), 0.0);
    EXPECT_LT(std::abs(ff.imag()), 1e-14);
  }
  for (long p : {2L, 3L}) {
    const SBFunction f = random_sb(rng, p, x_shape(1)), h = random_sb(rng, p, x_shape(1));
    for (int t = 0; t < 6; ++t) {
      const MatQ a = random_gl_padic(rng, 1, p, -2, 2);
      EXPECT_EQ(inner_X_at<Rational>(f, h, a), inner_X_at<Rational>(h, f, inverse(a)).conj());
    }
    const ScaledCyclotomic ff = inner_X_at<Rational>(f, f, MatQ::Identity(1, 1));
    EXPECT_GE(ff.to_complex().real(), 0.0);
    EXPECT_EQ(ff, ff.conj());
  }
}

TEST(DecayBound, StandardGaussian) {
  Rng rng(37);
  const FieldDescriptor R = FieldDescriptor::real();
  for (int n = 1; n <= 2; ++n) {
    const GaussianForm f = std_x(n);
    EXPECT_NEAR(decay_constant(f, f), 1.0, 1e-15);
    for (int s = 0; s < 200; ++s) {
      const MatR a = random_gl_real(rng, n, 200.0) * std::exp(uniform(rng, -2, 2));
      const KAKFactors<double> kk = kak(a);
      const double lhs = std::abs(inner_X_at<double>(f, f, a));
      EXPECT_LE(lhs, decay_product(kk.diag, n) * (1 + 1e-12));
    }
  }
  for (double a : {0.1, 0.9, 1.0, 4.0}) {
    EXPECT_LE(a / (1 + a * a), std::min(a, 1 / a));
  }
  EXPECT_THROW(decay_constant(random_gaussian(rng, R, x_shape(1), 1.0), std_x(1)), std::invalid_argument);
}

TEST(DecayBound, PadicEquality) {
  for (long p : {2L, 3L}) {
    const SBFunction f = SBFunction::ball(p, x_shape(1));
    EXPECT_EQ(decay_constant(f, f), 1.0);
    for (long k = -4; k <= 4; ++k) {
      const Rational a = p_power(p, k);
      EXPECT_EQ(inner_X_at<Rational>(f, f, q({{a}})), exact(p, padic_min(a, p)));
    }
  }
}

TEST(Majorant, Examples) {
  const FieldDescriptor R = FieldDescriptor::real();
  for (int n = 1; n <= 3; ++n) {
    EXPECT_NEAR(hc_majorant(VecR::Ones(n), 2.0, 3.5, R), 3.5, 1e-15);
  }
  Rng rng(38);
  for (int s = 0; s < 1000; ++s) {
    const int n = static_cast<int>(uniform_int(rng, 1, 3));
    VecR d(n);
    for (int i = 0; i < n; ++i) d(i) = std::exp(uniform(rng, -4, 4));
    EXPECT_GE(hc_majorant(d, 0.0, 1.0, R) * (1 + 1e-12), decay_product(d, n));
  }
}

TEST(Majorant, FittedConstantStable) {
  const GaussianForm f = std_x(2);
  const FieldDescriptor R = FieldDescriptor::real();
  for (double pexp : {0.0, 2.0, 6.0}) {
    auto fit = [&](int steps) {
      double C = 0;
      for (int i = -steps; i <= steps; ++i) {
        for (int j = -steps; j <= i; ++j) {
          VecR d(2);
          d << std::exp(4.0 * i / steps), std::exp(4.0 * j / steps);
          const double v = std::abs(inner_X_at<double>(f, f, MatR(d.asDiagonal())));
          C = std::max(C, v / hc_majorant(d, pexp, 1.0, R));
        }
      }
      return C;
    };
    const double coarse = fit(8), fine = fit(32);
    EXPECT_TRUE(std::isfinite(fine));
    EXPECT_LT(std::abs(fine - coarse) / fine, 0.1) << pexp;
  }
}

TEST(Truncation, BumpVanishes) {
  const FieldDescriptor R = FieldDescriptor::real();
  const Evaluable bump(
      [](const VecR& x) -> Complex {
        const double u = (x.norm() - 1.0) / 0.5;
        return std::abs(u) < 1 ? std::exp(-1.0 / (1 - u * u)) : 0.0;
      },
      R, x_shape(1));
  for (int m = 2; m <= 5; ++m) {
    for (double a : {0.5, 1.0, 2.0}) EXPECT_EQ(truncation_phi(bump, m, a, CutoffSchedule::quadratic).value, Complex(0.0));
  }
  EXPECT_GT(std::abs(truncation_phi(bump, 1, 1.0, CutoffSchedule::quadratic).value), 0.0);
}

TEST(Truncation, GaussianDecreasing) {
  const Evaluable f = to_evaluable(std_x(1));
  const std::vector<double> grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  const TruncationReport rep = truncation_sequence(f, 6, grid, 1.0);
  EXPECT_TRUE(rep.monotone);
  for (std::size_t i = 1; i < rep.at_one.size(); ++i) EXPECT_LE(rep.at_one[i], rep.at_one[i - 1] + 1e-15);
  // phi_m(1) against |f - f chi_m|^2 computed radially
  const int m = 3;
  const QuadResult direct = integrate_1d(
      [&](double rr) -> Complex {
        const double g = std::exp(-std::numbers::pi * rr * rr) * (1 - cutoff_value(rr, rr, m, CutoffSchedule::quadratic));
        return 2 * std::numbers::pi * rr * g * g;
      },
      0.0, 20.0, 1e-12, 1e-300);
  EXPECT_LT(std::abs(truncation_phi(f, m, 1.0, CutoffSchedule::quadratic).value - direct.value), 1e-10 * direct.value.real() + 1e-16);
}
