#pragma once

// Deterministic sample generators. Every generator draws only from the
// supplied engine, so a fixed seed reproduces the sample set exactly.

#include "ups/matrix.hpp"

#include <random>

namespace ups {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
long uniform_int(Rng& rng, long lo, long hi);

/// unit * p^v, unit = a / b with a, b coprime to p and small, v in [vlo, vhi].
Rational random_padic_scalar(Rng& rng, long p, long vlo, long vhi);
/// Integer-valued entries in [-bound, bound].
Rational random_small_integer(Rng& rng, long bound);

MatR random_real_matrix(Rng& rng, int rows, int cols, double scale = 1.0);
MatC random_complex_matrix(Rng& rng, int rows, int cols, double scale = 1.0);
/// Entries random_padic_scalar, or zero with probability zero_chance.
MatQ random_padic_matrix(Rng& rng, int rows, int cols, long p, long vlo, long vhi, double zero_chance = 0.2);

/// Invertible matrices; archimedean ones have condition number at most cond.
MatR random_gl_real(Rng& rng, int n, double cond = 50.0);
MatC random_gl_complex(Rng& rng, int n, double cond = 50.0);
MatQ random_gl_padic(Rng& rng, int n, long p, long vlo, long vhi);

/// det = 1.
MatR random_sl_real(Rng& rng, int n);
MatC random_sl_complex(Rng& rng, int n);
/// Product of random elementary integer matrices: det = 1, entries in Z.
MatQ random_sl_integral(Rng& rng, int n, int steps = 6, long bound = 3);

/// Regular y in Xbar (n x (n+1)).
MatR random_regular_real(Rng& rng, int rows, int cols);
MatC random_regular_complex(Rng& rng, int rows, int cols);
MatQ random_regular_padic(Rng& rng, int rows, int cols, long p, long vlo, long vhi);

}  // namespace ups
