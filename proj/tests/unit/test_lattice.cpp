#include "ups/lattice.hpp"
#include "ups/sampling.hpp"

#include <gtest/gtest.h>

using namespace ups;

namespace {

VecQ vec(std::initializer_list<Rational> xs) {
  VecQ v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

long coprime(Rng& rng, long p) {
  for (;;) {
    const long b = uniform_int(rng, 1, 5);
    if (b % p != 0) return b;
  }
}

MatQ random_integral_unimodular(Rng& rng, int d, long p) {
  for (;;) {
    MatQ m(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) m(i, j) = Rational(uniform_int(rng, -3, 3), coprime(rng, p));
    }
    const Rational det = determinant(m);
    if (det != 0 && valuation(det, p) == 0) return m;
  }
}

}  // namespace

TEST(Lattice, StandardExamples) {
  for (long p : {2L, 3L}) {
    for (int d : {1, 2, 4}) {
      EXPECT_EQ(Lattice::standard(d, p).dual(), Lattice::standard(d, p));
      EXPECT_EQ(Lattice::standard(d, p).volume(), Rational(1));
    }
    EXPECT_EQ(Lattice::standard(2, p, 1).volume(), p_power(p, -2));
    EXPECT_EQ(Lattice::standard(1, p).intersect(Lattice::standard(1, p, 1)), Lattice::standard(1, p, 1));
    const Coset a(vec({1}), Lattice::standard(1, p, 1)), b(vec({0}), Lattice::standard(1, p, 1));
    EXPECT_FALSE(intersect(a, b).has_value());
  }
}

TEST(Lattice, AffinePreimageExample) {
  const long p = 3;
  const Coset ball(VecQ::Zero(2), Lattice::standard(2, p));
  MatQ C(2, 1);
  C << 0, Rational(1, 3);
  const auto pre = affine_preimage(ball, vec({3, 0}), C);
  ASSERT_TRUE(pre.has_value());
  EXPECT_EQ(pre->lattice, Lattice::standard(1, p, 1));
  EXPECT_EQ(pre->lattice.volume(), Rational(1, 3));
  EXPECT_TRUE(pre->contains(VecQ::Zero(1)));
}

TEST(Lattice, HermiteFormIsCanonical) {
  Rng rng(3);
  for (long p : {2L, 3L, 5L}) {
    for (int trial = 0; trial < 40; ++trial) {
      const int d = static_cast<int>(uniform_int(rng, 1, 4));
      const MatQ B = random_gl_padic(rng, d, p, -2, 2);
      const MatQ U = random_integral_unimodular(rng, d, p);
      const Lattice L1 = Lattice::from_generators(B, p);
      const Lattice L2 = Lattice::from_generators(B * U, p);
      EXPECT_EQ(L1, L2);
      EXPECT_EQ(L1.volume(), abs_norm(determinant(B), p));
      // redundant generators do not change the lattice
      MatQ G(d, 2 * d);
      G << B, B * random_integral_unimodular(rng, d, p) * Rational(p);
      EXPECT_EQ(Lattice::from_generators(G, p), L1);
      // columns of B are members, a scaled-out vector is not
      for (int j = 0; j < d; ++j) EXPECT_TRUE(L1.contains(B.col(j)));
      EXPECT_FALSE(L1.contains(L1.basis().col(0) / Rational(p)));
      EXPECT_EQ(L1.dual().dual(), L1);
    }
  }
}

TEST(Lattice, VolumeMultiplicativity) {
  Rng rng(4);
  for (long p : {2L, 3L}) {
    for (int trial = 0; trial < 40; ++trial) {
      const int d = static_cast<int>(uniform_int(rng, 1, 3));
      const Lattice L = Lattice::from_generators(random_gl_padic(rng, d, p, -2, 2), p);
      const MatQ M = random_gl_padic(rng, d, p, -2, 2);
      EXPECT_EQ(L.image(M).volume(), abs_norm(determinant(M), p) * L.volume());
      EXPECT_EQ(L.dual().volume(), Rational(1) / L.volume());
    }
  }
}

TEST(Lattice, IntersectionAndSumMembership) {
  Rng rng(6);
  for (long p : {2L, 3L}) {
    for (int trial = 0; trial < 30; ++trial) {
      const int d = static_cast<int>(uniform_int(rng, 1, 3));
      const Lattice L1 = Lattice::from_generators(random_gl_padic(rng, d, p, -1, 2), p);
      const Lattice L2 = Lattice::from_generators(random_gl_padic(rng, d, p, -1, 2), p);
      const Lattice I = L1.intersect(L2);
      for (int k = 0; k < 30; ++k) {
        const VecQ v = random_padic_matrix(rng, d, 1, p, -2, 3, 0.3).col(0);
        EXPECT_EQ(I.contains(v), L1.contains(v) && L2.contains(v));
      }
      const Lattice S = L1.sum(L2);
      for (int j = 0; j < d; ++j) {
        EXPECT_TRUE(S.contains(L1.basis().col(j)));
        EXPECT_TRUE(S.contains(L2.basis().col(j)));
      }
      EXPECT_EQ(S.volume() * I.volume(), L1.volume() * L2.volume());
    }
  }
}

TEST(Lattice, CosetIntersectionMembership) {
  Rng rng(7);
  for (long p : {2L, 3L}) {
    int nonempty = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const int d = static_cast<int>(uniform_int(rng, 1, 3));
      const Coset a(random_padic_matrix(rng, d, 1, p, -2, 1).col(0),
                    Lattice::from_generators(random_gl_padic(rng, d, p, -1, 2), p));
      const Coset b(random_padic_matrix(rng, d, 1, p, -2, 1).col(0),
                    Lattice::from_generators(random_gl_padic(rng, d, p, -1, 2), p));
      const auto c = intersect(a, b);
      if (c) ++nonempty;
      for (int k = 0; k < 30; ++k) {
        VecQ v = random_padic_matrix(rng, d, 1, p, -2, 3, 0.3).col(0);
        if (c && k % 2 == 0) v = c->center + c->lattice.basis() * random_padic_matrix(rng, d, 1, p, 0, 2).col(0);
        EXPECT_EQ(c.has_value() && c->contains(v), a.contains(v) && b.contains(v));
      }
    }
    EXPECT_GT(nonempty, 5);
  }
}

TEST(Lattice, AffinePreimageMembership) {
  Rng rng(8);
  for (long p : {2L, 3L}) {
    for (int trial = 0; trial < 40; ++trial) {
      const int d = static_cast<int>(uniform_int(rng, 1, 4));
      const int k = static_cast<int>(uniform_int(rng, 1, d));
      const Coset target(random_padic_matrix(rng, d, 1, p, -1, 1).col(0),
                         Lattice::from_generators(random_gl_padic(rng, d, p, -1, 1), p));
      MatQ C = random_padic_matrix(rng, d, k, p, -1, 1);
      while (rank(C) < k) C = random_padic_matrix(rng, d, k, p, -1, 1);
      const VecQ A = random_padic_matrix(rng, d, 1, p, -1, 1).col(0);
      const auto pre = affine_preimage(target, A, C);
      for (int s = 0; s < 100; ++s) {
        VecQ z = random_padic_matrix(rng, k, 1, p, -2, 3, 0.3).col(0);
        if (pre && s % 2 == 0) z = pre->center + pre->lattice.basis() * random_padic_matrix(rng, k, 1, p, 0, 2).col(0);
        EXPECT_EQ(pre.has_value() && pre->contains(z), target.contains(A + C * z));
      }
    }
  }
}

TEST(Lattice, SmithFormDecomposes) {
  Rng rng(10);
  for (long p : {2L, 3L}) {
    for (int trial = 0; trial < 30; ++trial) {
      const int r = static_cast<int>(uniform_int(rng, 1, 4)), c = static_cast<int>(uniform_int(rng, 1, 4));
      const MatQ M = random_padic_matrix(rng, r, c, p, -2, 2);
      const SmithForm sf = smith_form(M, p);
      const MatQ D = sf.U * M * sf.V;
      EXPECT_TRUE(is_padic_integral(sf.U, p) && is_padic_integral(sf.V, p));
      EXPECT_EQ(valuation(determinant(sf.U), p), 0);
      EXPECT_EQ(valuation(determinant(sf.V), p), 0);
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) {
          const bool diag = i == j && i < static_cast<int>(sf.exponents.size());
          EXPECT_EQ(D(i, j), diag ? p_power(p, sf.exponents[static_cast<std::size_t>(i)]) : Rational(0));
        }
      }
      for (std::size_t i = 1; i < sf.exponents.size(); ++i) EXPECT_LE(sf.exponents[i - 1], sf.exponents[i]);
      EXPECT_EQ(static_cast<int>(sf.exponents.size()), rank(M));
    }
  }
}

TEST(Lattice, FibrationReassembles) {
  Rng rng(12);
  const long p = 3;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = static_cast<int>(uniform_int(rng, 2, 4));
    const int k = static_cast<int>(uniform_int(rng, 1, d - 1));
    const Coset cs(random_padic_matrix(rng, d, 1, p, -1, 1).col(0),
                   Lattice::from_generators(random_gl_padic(rng, d, p, -1, 2), p));
    const CosetFibration fb = fibration(cs, k);
    for (int s = 0; s < 50; ++s) {
      const VecQ v = s % 2 == 0 ? VecQ(cs.center + cs.lattice.basis() * random_padic_matrix(rng, d, 1, p, 0, 2).col(0))
                                : VecQ(random_padic_matrix(rng, d, 1, p, -2, 2, 0.3).col(0));
      const VecQ a = v.head(k), z = v.tail(d - k);
      const bool in_proj = fb.proj.contains(a - fb.center_a);
      const bool in_fiber = in_proj && fb.fiber.contains(z - fb.fiber_center - fb.section * (a - fb.center_a));
      EXPECT_EQ(in_fiber, cs.contains(v));
    }
  }
}
