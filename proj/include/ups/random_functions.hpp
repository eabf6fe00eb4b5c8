#pragma once

// Random members of the function classes, drawn only from the supplied
// engine.

#include "ups/gaussian.hpp"
#include "ups/sampling.hpp"
#include "ups/sb_function.hpp"

namespace ups {

/// B^T B + floor I for a random B.
MatR random_spd(Rng& rng, int d, double floor = 0.3);

/// Random Gaussian form; phase bounds the real part of ell, and the
/// imaginary part is kept at a fifth of it.
GaussianForm random_gaussian(Rng& rng, FieldDescriptor fd, Shape shape, double phase = 0.5);

/// A few twisted indicators of random cosets.
SBFunction random_sb(Rng& rng, long p, Shape shape, int terms = 3, long vlo = -1, long vhi = 1);

/// Haar-random orthogonal (real) or unitary (complex) n x n matrix.
MatR random_orthogonal(Rng& rng, int n);
MatC random_unitary(Rng& rng, int n);

}  // namespace ups
