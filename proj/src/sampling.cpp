#include "ups/sampling.hpp"

#include <cmath>

namespace ups {

double uniform(Rng& rng, double lo, double hi) {
  // Explicit construction keeps results identical across standard libraries.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

long uniform_int(Rng& rng, long lo, long hi) {
  const auto span = static_cast<unsigned long long>(hi - lo) + 1ULL;
  return lo + static_cast<long>(rng() % span);
}

namespace {

long coprime_draw(Rng& rng, long p, long bound) {
  for (;;) {
    const long a = uniform_int(rng, 1, bound);
    if (a % p != 0) return a;
  }
}

}  // namespace

Rational random_padic_scalar(Rng& rng, long p, long vlo, long vhi) {
  const long sign = uniform_int(rng, 0, 1) == 0 ? 1 : -1;
  const Rational unit(sign * coprime_draw(rng, p, 4 * p + 6), coprime_draw(rng, p, 2 * p + 3));
  return unit * p_power(p, uniform_int(rng, vlo, vhi));
}

Rational random_small_integer(Rng& rng, long bound) { return Rational(uniform_int(rng, -bound, bound)); }

MatR random_real_matrix(Rng& rng, int rows, int cols, double scale) {
  MatR m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = scale * uniform(rng, -1.0, 1.0);
  }
  return m;
}

MatC random_complex_matrix(Rng& rng, int rows, int cols, double scale) {
  MatC m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = uniform(rng, -1.0, 1.0);
      const double im = uniform(rng, -1.0, 1.0);
      m(i, j) = scale * Complex(re, im);
    }
  }
  return m;
}

MatQ random_padic_matrix(Rng& rng, int rows, int cols, long p, long vlo, long vhi, double zero_chance) {
  MatQ m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      m(i, j) = uniform(rng, 0.0, 1.0) < zero_chance ? Rational(0) : random_padic_scalar(rng, p, vlo, vhi);
    }
  }
  return m;
}

namespace {

template <class M, class Gen>
M draw_conditioned(Gen&& gen, double cond) {
  for (;;) {
    M m = gen();
    const double smin = smallest_singular_value(m);
    if (smin <= 0) continue;
    Eigen::JacobiSVD<M> svd(m);
    if (svd.singularValues()(0) / smin <= cond) return m;
  }
}

}  // namespace

MatR random_gl_real(Rng& rng, int n, double cond) {
  return draw_conditioned<MatR>([&] { return random_real_matrix(rng, n, n, 2.0); }, cond);
}

MatC random_gl_complex(Rng& rng, int n, double cond) {
  return draw_conditioned<MatC>([&] { return random_complex_matrix(rng, n, n, 2.0); }, cond);
}

MatQ random_gl_padic(Rng& rng, int n, long p, long vlo, long vhi) {
  for (;;) {
    MatQ m = random_padic_matrix(rng, n, n, p, vlo, vhi);
    if (rank(m) == n) return m;
  }
}

MatR random_sl_real(Rng& rng, int n) {
  MatR g = random_gl_real(rng, n, 20.0);
  double d = determinant(g);
  if (d < 0) {
    g.row(0) *= -1.0;
    d = -d;
  }
  return g / std::pow(d, 1.0 / n);
}

MatC random_sl_complex(Rng& rng, int n) {
  MatC g = random_gl_complex(rng, n, 20.0);
  const Complex d = determinant(g);
  g.row(0) /= d;
  return g;
}

MatQ random_sl_integral(Rng& rng, int n, int steps, long bound) {
  MatQ g = MatQ::Identity(n, n);
  for (int s = 0; s < steps; ++s) {
    const long i = uniform_int(rng, 0, n - 1);
    long j = uniform_int(rng, 0, n - 2);
    if (j >= i) ++j;
    MatQ e = MatQ::Identity(n, n);
    e(i, j) = Rational(uniform_int(rng, -bound, bound));
    g = g * e;
  }
  return g;
}

MatR random_regular_real(Rng& rng, int rows, int cols) {
  for (;;) {
    MatR m = random_real_matrix(rng, rows, cols, 1.5);
    if (smallest_singular_value(m) > 0.1) return m;
  }
}

MatC random_regular_complex(Rng& rng, int rows, int cols) {
  for (;;) {
    MatC m = random_complex_matrix(rng, rows, cols, 1.5);
    if (smallest_singular_value(m) > 0.1) return m;
  }
}

MatQ random_regular_padic(Rng& rng, int rows, int cols, long p, long vlo, long vhi) {
  for (;;) {
    MatQ m = random_padic_matrix(rng, rows, cols, p, vlo, vhi);
    if (rank(m) == std::min(rows, cols)) return m;
  }
}

}  // namespace ups
