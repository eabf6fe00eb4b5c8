#include "ups/geometry.hpp"
#include "ups/sampling.hpp"

#include <gtest/gtest.h>

using namespace ups;

namespace {

MatQ q(std::initializer_list<std::initializer_list<Rational>> rows) {
  MatQ m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const auto& x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

MatR unipotent_n(Rng& rng, int n) {
  MatR m = MatR::Identity(n + 1, n + 1);
  m.topRightCorner(n, 1) = random_real_matrix(rng, n, 1, 3.0);
  return m;
}

MatR unipotent_nbar(Rng& rng, int n) { return unipotent_n(rng, n).transpose(); }

}  // namespace

TEST(Actions, Examples) {
  MatR x(2, 1);
  x << 1, 0;
  EXPECT_EQ(act_g_x<double>(MatR::Identity(2, 2), x), x);
  MatR a(1, 1);
  a << 2;
  EXPECT_EQ(act_x_a<double>(x, a), MatR(x * 2.0));
  const MatQ y = q({{1, 0}});
  EXPECT_EQ(act_y_a<Rational>(y, q({{2}})), q({{Rational(1, 2), 0}}));
  EXPECT_EQ(act_g_y<Rational>(MatQ::Identity(2, 2), y), y);
}

TEST(Actions, Laws) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(uniform_int(rng, 1, 3));
    const MatR x = random_regular_real(rng, n + 1, n);
    const MatR y = random_regular_real(rng, n, n + 1);
    const MatR a = random_gl_real(rng, n), b = random_gl_real(rng, n);
    const MatR g = random_sl_real(rng, n + 1), h = random_sl_real(rng, n + 1);
    EXPECT_EQ(rank(act_x_a<double>(x, a), 1e-10), rank(x, 1e-10));
    EXPECT_LT((act_y_a<double>(act_y_a<double>(y, a), b) - act_y_a<double>(y, MatR(a * b))).norm(), 1e-9);
    EXPECT_LT((act_g_y<double>(g, act_g_y<double>(h, y)) - act_g_y<double>(MatR(g * h), y)).norm(), 1e-9);
    EXPECT_LT((act_g_x<double>(g, act_g_x<double>(h, x)) - act_g_x<double>(MatR(g * h), x)).norm(), 1e-9);
  }
  for (int trial = 0; trial < 30; ++trial) {
    const long p = trial % 2 == 0 ? 2 : 3;
    const MatQ y = random_regular_padic(rng, 2, 3, p, -2, 2);
    const MatQ a = random_gl_padic(rng, 2, p, -1, 1), b = random_gl_padic(rng, 2, p, -1, 1);
    EXPECT_EQ(act_y_a<Rational>(act_y_a<Rational>(y, a), b), act_y_a<Rational>(y, MatQ(a * b)));
  }
}

TEST(BMap, Examples) {
  for (int n = 1; n <= 3; ++n) {
    MatQ x0 = MatQ::Zero(n + 1, n);
    x0.topRows(n) = MatQ::Identity(n, n);
    EXPECT_EQ(b_map<Rational>(MatQ::Identity(n + 1, n + 1)), x0);
    MatQ y0 = MatQ::Zero(n, n + 1);
    y0.leftCols(n) = MatQ::Identity(n, n);
    EXPECT_EQ(bbar_map<Rational>(MatQ::Identity(n + 1, n + 1)), y0);
  }
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const MatR g = random_sl_real(rng, n + 1);
    EXPECT_EQ(rank(b_map<double>(g), 1e-10), n);
    const MatR m = unipotent_n(rng, n);
    EXPECT_LT((b_map<double>(MatR(g * m)) - b_map<double>(g)).norm(), 1e-9);
    const MatR mb = unipotent_nbar(rng, n);
    EXPECT_LT((bbar_map<double>(MatR(g * mb)) - bbar_map<double>(g)).norm(), 1e-8);
    const MatR h = random_sl_real(rng, n + 1);
    EXPECT_LT((bbar_map<double>(MatR(h * g)) - act_g_y<double>(h, bbar_map<double>(g))).norm(), 1e-8);
    // L-equivariance of b
    const MatR a = random_gl_real(rng, n);
    EXPECT_LT((b_map<double>(MatR(g * levi_embed<double>(a))) - act_x_a<double>(b_map<double>(g), a)).norm(), 1e-8);
  }
}

TEST(BMap, FibersAreNCosets) {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 2;
    const MatQ g = random_sl_integral(rng, n + 1);
    MatQ m = MatQ::Identity(n + 1, n + 1);
    for (int i = 0; i < n; ++i) m(i, n) = random_small_integer(rng, 4);
    const MatQ g_same = g * m;
    const MatQ g_other = trial % 3 == 0 ? MatQ(g * m.transpose()) : random_sl_integral(rng, n + 1);
    EXPECT_EQ(b_map<Rational>(g_same), b_map<Rational>(g));
    EXPECT_TRUE(in_unipotent_n<Rational>(MatQ(inverse(g) * g_same)));
    const bool same = b_map<Rational>(g_other) == b_map<Rational>(g);
    EXPECT_EQ(same, in_unipotent_n<Rational>(MatQ(inverse(g) * g_other)));
  }
}

TEST(Completion, Examples) {
  EXPECT_EQ(unimodular_completion<Rational>(q({{1, 0}})), MatQ::Identity(2, 2));
  for (long p : {2L, 3L, 5L}) {
    const MatQ y = q({{Rational(1, p), 0}});
    EXPECT_EQ(unimodular_completion<Rational>(y), q({{p, 0}, {0, Rational(1, p)}}));
    const Fiber<Rational> fib = fiber_param<Rational>(y);
    EXPECT_EQ(fib.A, q({{p}, {0}}));
    EXPECT_EQ(fib.c, q({{0}, {Rational(1, p)}}));
  }
  const Fiber<double> fib = fiber_param<double>(MatR(MatR::Identity(1, 2)));
  MatR A(2, 1), c(2, 1);
  A << 1, 0;
  c << 0, 1;
  EXPECT_EQ(fib.A, A);
  EXPECT_EQ(fib.c, c);
  EXPECT_THROW(unimodular_completion<Rational>(q({{0, 0}})), std::invalid_argument);
  EXPECT_THROW(fiber_param<double>(MatR(MatR::Zero(1, 2))), std::invalid_argument);
}

TEST(Completion, Postconditions) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const MatR y = random_regular_real(rng, n, n + 1);
    const MatR g = unimodular_completion<double>(y);
    EXPECT_NEAR(determinant(g), 1.0, 1e-10);
    EXPECT_LT((bbar_map<double>(g) - y).norm(), 1e-10);
    const Fiber<double> fib = fiber_param<double>(y);
    const MatR z = random_real_matrix(rng, 1, n, 3.0);
    EXPECT_LT((y * fib.point(z) - MatR::Identity(n, n)).norm(), 1e-9);
    EXPECT_LT((y * fib.c).norm(), 1e-10);

    const MatC yc = random_regular_complex(rng, n, n + 1);
    const MatC gc = unimodular_completion<Complex>(yc);
    EXPECT_NEAR(std::abs(determinant(gc) - 1.0), 0.0, 1e-10);
    EXPECT_LT((bbar_map<Complex>(gc) - yc).norm(), 1e-10);

    const long p = trial % 2 == 0 ? 2 : 3;
    const MatQ yq = random_regular_padic(rng, n, n + 1, p, -2, 2);
    const MatQ gq = unimodular_completion<Rational>(yq);
    EXPECT_EQ(determinant(gq), Rational(1));
    EXPECT_EQ(bbar_map<Rational>(gq), yq);
    const Fiber<Rational> fq = fiber_param<Rational>(yq);
    EXPECT_EQ(MatQ(yq * fq.A), MatQ::Identity(n, n));
    EXPECT_EQ(MatQ(yq * fq.c), MatQ::Zero(n, 1));
  }
}

TEST(Kak, Examples) {
  MatR a(2, 2);
  a << 2, 0, 0, 0.5;
  const auto f = kak(a);
  EXPECT_NEAR(f.diag(0), 2.0, 1e-14);
  EXPECT_NEAR(f.diag(1), 0.5, 1e-14);
  EXPECT_LT((f.reconstruct() - a).norm(), 1e-12);
  const auto fq = kak(q({{3, 0}, {0, Rational(1, 3)}}), 3);
  EXPECT_EQ(fq.diag(0), Rational(1, 3));
  EXPECT_EQ(fq.diag(1), Rational(3));
  EXPECT_EQ(fq.exponents, (std::vector<long>{-1, 1}));
  EXPECT_THROW(kak(MatR(MatR::Zero(2, 2))), std::invalid_argument);
  EXPECT_THROW(kak(MatQ(MatQ::Zero(2, 2)), 3), std::invalid_argument);
}

TEST(Kak, Reconstruction) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const MatR a = random_gl_real(rng, n);
    const auto f = kak(a);
    EXPECT_LT((f.reconstruct() - a).norm(), 1e-10);
    for (int i = 1; i < n; ++i) EXPECT_GE(f.diag(i - 1), f.diag(i));
    EXPECT_LT((f.k1.transpose() * f.k1 - MatR::Identity(n, n)).norm(), 1e-10);
    const MatC ac = random_gl_complex(rng, n);
    const auto fc = kak(ac);
    EXPECT_LT((fc.reconstruct() - ac).norm(), 1e-10);
    EXPECT_LT((fc.k2 * fc.k2.adjoint() - MatC::Identity(n, n)).norm(), 1e-10);
    const long p = trial % 2 == 0 ? 2 : 3;
    const MatQ aq = random_gl_padic(rng, n, p, -2, 2);
    const auto fq = kak(aq, p);
    EXPECT_EQ(fq.reconstruct(), aq);
    EXPECT_TRUE(is_padic_integral(fq.k1, p) && is_padic_integral(fq.k2, p));
    EXPECT_EQ(valuation(determinant(fq.k1), p), 0);
    for (int i = 1; i < n; ++i) EXPECT_LE(fq.exponents[i - 1], fq.exponents[i]);
  }
}

TEST(Rho, Examples) {
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    VecR d(1);
    d << uniform(rng, 0.01, 100);
    EXPECT_DOUBLE_EQ(rho_weight(d, FieldDescriptor::real()), 1.0);
  }
  VecR d(2);
  d << 2, 0.5;
  EXPECT_NEAR(rho_weight(d, FieldDescriptor::real()), 0.5, 1e-15);
  EXPECT_EQ(rho_weight_exponent({-1, 1}), Rational(-1));
  const RhoChain c = rho_chain_exponents({Rational(1), Rational(-1)});
  EXPECT_EQ(c.product_formula, Rational(-1));
  EXPECT_EQ(c.rho_functional, c.product_formula);
  EXPECT_GE(c.product_formula, c.lower_mid);
  EXPECT_GE(c.lower_mid, c.lower_low);
}

TEST(MeasureScale, Examples) {
  MatR a(1, 1);
  a << 2;
  EXPECT_DOUBLE_EQ(measure_scale<double>(a, FieldDescriptor::real()), 0.25);
  EXPECT_DOUBLE_EQ(measure_scale<double>(MatR::Identity(3, 3), FieldDescriptor::real()), 1.0);
  EXPECT_EQ(measure_scale<Rational>(q({{3}}), FieldDescriptor::padic(3)), Rational(9));
  MatC ac(1, 1);
  ac << Complex(0, 2);
  EXPECT_DOUBLE_EQ(measure_scale<Complex>(ac, FieldDescriptor::complex()), 1.0 / 16);
}

TEST(CartanTheta, Properties) {
  const MatR I = MatR::Identity(3, 3);
  EXPECT_EQ(cartan_theta<double>(I), I);
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    const MatR m = unipotent_n(rng, n);
    const MatR t = cartan_theta<double>(m);
    EXPECT_LT(t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm(), 1e-12);
    EXPECT_LT((t.diagonal() - VecR::Ones(n + 1)).norm(), 1e-12);
    const MatC g = random_sl_complex(rng, n + 1);
    EXPECT_LT((cartan_theta<Complex>(cartan_theta<Complex>(g)) - g).norm(), 1e-9);
    EXPECT_LT((cartan_theta<Complex>(g) * g.adjoint() - MatC::Identity(n + 1, n + 1)).norm(), 1e-9);
  }
}
