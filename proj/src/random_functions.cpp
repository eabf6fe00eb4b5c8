#include "ups/random_functions.hpp"

#include <Eigen/QR>

namespace ups {

MatR random_spd(Rng& rng, int d, double floor) {
  const MatR B = random_real_matrix(rng, d, d, 0.6);
  return B.transpose() * B + floor * MatR::Identity(d, d);
}

GaussianForm random_gaussian(Rng& rng, FieldDescriptor fd, Shape shape, double phase) {
  const int d = shape.entries() * fd.coordinates_per_scalar();
  VecC ell(d);
  for (int i = 0; i < d; ++i) ell(i) = Complex(uniform(rng, -phase, phase), uniform(rng, -0.2 * phase, 0.2 * phase));
  const Complex kappa(uniform(rng, 0.5, 1.5), uniform(rng, -0.5, 0.5));
  return GaussianForm(kappa, random_spd(rng, d), ell, fd, shape);
}

SBFunction random_sb(Rng& rng, long p, Shape shape, int terms, long vlo, long vhi) {
  SBFunction f(p, shape);
  const int d = shape.entries();
  for (int t = 0; t < terms; ++t) {
    MatQ B = random_gl_padic(rng, d, p, 0, vhi);
    const VecQ center = random_padic_matrix(rng, d, 1, p, vlo, vhi, 0.3).col(0);
    VecQ twist = VecQ::Zero(d);
    if (uniform(rng, 0, 1) < 0.5) twist = random_padic_matrix(rng, d, 1, p, -1, 1, 0.5).col(0);
    const CyclotomicValue c = CyclotomicValue::rational(p, Rational(uniform_int(rng, 1, 4), uniform_int(rng, 1, 3))) *
                              padic_character(random_padic_scalar(rng, p, -1, 0), p);
    f.add_term(c, twist, Coset(center, Lattice::from_generators(B, p)));
  }
  return f;
}

namespace {

// QR of a Gaussian matrix with the phases of R's diagonal removed.
template <class M>
M haar(const M& g) {
  Eigen::HouseholderQR<M> qr(g);
  M q = qr.householderQ();
  const M r = qr.matrixQR();
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    const auto d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace

MatR random_orthogonal(Rng& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  MatR g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = N(rng);
  return haar(g);
}

MatC random_unitary(Rng& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  MatC g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(N(rng), N(rng));
  return haar(g);
}

}  // namespace ups
