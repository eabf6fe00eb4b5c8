#include "ups/cyclotomic.hpp"
#include "ups/field.hpp"
#include "ups/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ups;

namespace {

CyclotomicValue zeta(long p, long M, long r) { return CyclotomicValue::root_of_unity(p, M, BigInt(r)); }
CyclotomicValue one(long p) { return CyclotomicValue::rational(p, 1); }

}  // namespace

TEST(Rational, ValuationAndResidue) {
  EXPECT_EQ(valuation(Rational(12), 3), 1);
  EXPECT_EQ(valuation(Rational(1, 9), 3), -2);
  EXPECT_EQ(valuation(Rational(0), 3), kInfiniteValuation);
  EXPECT_EQ(fractional_part(Rational(1, 3), 3), Rational(1, 3));
  EXPECT_EQ(fractional_part(Rational(-1, 3), 3), Rational(2, 3));
  // 1/2 is a 3-adic integer, so its fractional part vanishes
  EXPECT_EQ(fractional_part(Rational(1, 2), 3), Rational(0));
  // 1/6 = (1/2)(1/3): the 3-adic digit of 1/2 mod 3 is 2
  EXPECT_EQ(fractional_part(Rational(1, 6), 3), Rational(2, 3));
  EXPECT_EQ(residue(Rational(7), 2, 2), Rational(3));
  EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(to_string(Rational(5)), "5/1");
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(AbsNorm, Examples) {
  EXPECT_DOUBLE_EQ(abs_norm(-2.0), 2.0);
  EXPECT_DOUBLE_EQ(abs_norm(Complex(1, 1)), 2.0);
  EXPECT_EQ(abs_norm(Rational(12), 3), Rational(1, 3));
  EXPECT_EQ(abs_norm(Rational(0), 3), Rational(0));
}

TEST(AbsNorm, Multiplicative) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double s = uniform(rng, -5, 5), t = uniform(rng, -5, 5);
    EXPECT_NEAR(abs_norm(s * t), abs_norm(s) * abs_norm(t), 1e-12 * abs_norm(s * t));
    const Complex z(uniform(rng, -3, 3), uniform(rng, -3, 3)), w(uniform(rng, -3, 3), uniform(rng, -3, 3));
    EXPECT_NEAR(abs_norm(z * w), abs_norm(z) * abs_norm(w), 1e-12 * abs_norm(z * w));
    for (long p : {2L, 3L, 5L}) {
      const Rational a = random_padic_scalar(rng, p, -4, 4), b = random_padic_scalar(rng, p, -4, 4);
      EXPECT_EQ(abs_norm(a * b, p), abs_norm(a, p) * abs_norm(b, p));
      EXPECT_EQ(abs_norm(a, p) * abs_norm(Rational(1 / a), p), Rational(1));
      EXPECT_EQ(valuation(a * b, p), valuation(a, p) + valuation(b, p));
      EXPECT_EQ(abs_norm(a, p), p_power(p, -valuation(a, p)));
    }
  }
}

TEST(AddChar, Examples) {
  const Complex c = add_char(0.5);
  EXPECT_NEAR(c.real(), -1.0, 1e-15);
  EXPECT_NEAR(c.imag(), 0.0, 1e-15);
  EXPECT_EQ(add_char(Rational(1, 3), 3), zeta(3, 1, 1));
  for (const Rational& s : {Rational(0), Rational(7), Rational(-5, 2), Rational(9, 4)}) {
    EXPECT_EQ(add_char(s, 3), one(3));
  }
  EXPECT_FALSE(add_char(Rational(1, 9), 3).is_rational());
  EXPECT_EQ(add_char(Rational(1, 9), 3).conductor_exponent(), 2);
}

TEST(AddChar, Homomorphism) {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    for (long p : {2L, 3L, 5L}) {
      const Rational s = random_padic_scalar(rng, p, -3, 2), t = random_padic_scalar(rng, p, -3, 2);
      EXPECT_EQ(add_char(s + t, p), add_char(s, p) * add_char(t, p));
      // exact value agrees with the floating character e^{2 pi i {s}}
      const Complex z = add_char(s, p).to_complex();
      const Complex ref = std::polar(1.0, 2 * std::numbers::pi * to_double(fractional_part(s, p)));
      EXPECT_NEAR(std::abs(z - ref), 0.0, 1e-12);
    }
    const double a = uniform(rng, -9, 9), b = uniform(rng, -9, 9);
    EXPECT_NEAR(std::abs(add_char(a + b) - add_char(a) * add_char(b)), 0.0, 1e-12);
  }
}

TEST(Cyclotomic, Examples) {
  const auto z3 = zeta(3, 1, 1);
  EXPECT_EQ(z3 * z3 * z3, one(3));
  EXPECT_TRUE((one(3) + z3 + z3 * z3).is_zero());
  EXPECT_EQ(zeta(5, 1, 1).conj(), zeta(5, 1, 4));
  EXPECT_THROW(zeta(3, 1, 1) + zeta(5, 1, 1), std::invalid_argument);
}

TEST(Cyclotomic, CanonicalForm) {
  // zeta_9^3 = zeta_3
  EXPECT_EQ(zeta(3, 2, 3), zeta(3, 1, 1));
  EXPECT_EQ(zeta(3, 2, 3).conductor_exponent(), 1);
  // sum of all 9th roots of unity vanishes
  CyclotomicValue s(3);
  for (long r = 0; r < 9; ++r) s += zeta(3, 2, r);
  EXPECT_TRUE(s.is_zero());
  // sum of primitive 4th roots: i + (-i) = 0; zeta_4^2 = -1
  EXPECT_EQ(zeta(2, 2, 2), CyclotomicValue::rational(2, -1));
  EXPECT_EQ(zeta(2, 1, 1), CyclotomicValue::rational(2, -1));
  EXPECT_TRUE((zeta(2, 3, 1) + zeta(2, 3, 5)).is_zero());
}

TEST(Cyclotomic, FieldLaws) {
  Rng rng(9);
  auto draw = [&](long p) {
    CyclotomicValue v(p);
    for (int k = 0; k < 3; ++k) {
      const long M = uniform_int(rng, 0, 2);
      v += zeta(p, M, uniform_int(rng, 0, 30)) * Rational(uniform_int(rng, -4, 4), uniform_int(rng, 1, 3));
    }
    return v;
  };
  for (int i = 0; i < 100; ++i) {
    for (long p : {2L, 3L, 5L}) {
      const auto u = draw(p), v = draw(p), w = draw(p);
      EXPECT_EQ((v * w) * u, v * (w * u));
      EXPECT_EQ((v * w).conj(), v.conj() * w.conj());
      EXPECT_EQ(v * (w + u), v * w + v * u);
      EXPECT_NEAR(std::abs((v * w).to_complex() - v.to_complex() * w.to_complex()), 0.0, 1e-9);
    }
  }
}

TEST(ScaledCyclotomic, HalfPowers) {
  const ScaledCyclotomic sqrt3(Rational(1, 2), one(3));
  const ScaledCyclotomic three = sqrt3 * sqrt3;
  EXPECT_EQ(three.exponent(), Rational(0));
  EXPECT_EQ(three.value(), CyclotomicValue::rational(3, 3));
  EXPECT_NEAR(sqrt3.to_complex().real(), std::sqrt(3.0), 1e-14);
  const ScaledCyclotomic inv_sqrt3(Rational(-1, 2), one(3));
  EXPECT_EQ(inv_sqrt3.exponent(), Rational(1, 2));
  EXPECT_EQ(inv_sqrt3 * sqrt3, ScaledCyclotomic(one(3)));
  EXPECT_THROW(sqrt3 + ScaledCyclotomic(one(3)), std::domain_error);
}

TEST(FieldDescriptor, Basics) {
  EXPECT_EQ(FieldDescriptor::real().real_dimension(), 1);
  EXPECT_EQ(FieldDescriptor::complex().real_dimension(), 2);
  EXPECT_EQ(FieldDescriptor::padic(7).residue_cardinality(), 7);
  EXPECT_THROW(FieldDescriptor::padic(6), std::invalid_argument);
  EXPECT_THROW(FieldDescriptor::padic(3).real_dimension(), std::logic_error);
}
