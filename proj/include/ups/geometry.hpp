#pragma once

// The spaces X = M_{n+1,n}(F) and Xbar = M_{n,n+1}(F), the groups
// G = SL(n+1, F) and L = GL(n, F), their actions, the maps b and bbar,
// unimodular completions, fibers {x : y x = I}, KAK factorizations and the
// rho weight.

#include "ups/lattice.hpp"
#include "ups/matrix.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ups {

/// |.|_F of a determinant-like scalar, as double (archimedean) or exact.
template <class S>
using abs_t = std::conditional_t<std::is_same_v<S, Rational>, Rational, double>;

template <class S>
abs_t<S> field_abs(const S& s, const FieldDescriptor& fd) {
  if constexpr (std::is_same_v<S, Rational>) {
    return abs_norm(s, fd.prime());
  } else {
    (void)fd;
    return abs_norm(s);
  }
}

template <class S>
abs_t<S> abs_det(const Mat<S>& a, const FieldDescriptor& fd) {
  return field_abs<S>(determinant(a), fd);
}

/// Rank decision: exact over Q, smallest singular value otherwise.
template <class S>
int matrix_rank(const Mat<S>& m, double tol = kDefaultRankTolerance) {
  if constexpr (std::is_same_v<S, Rational>) {
    (void)tol;
    return rank(m);
  } else {
    return rank(m, tol);
  }
}

template <class S>
bool is_regular(const Mat<S>& m, double tol = kDefaultRankTolerance) {
  return matrix_rank<S>(m, tol) == std::min(m.rows(), m.cols());
}

inline Shape x_shape(int n) { return {n + 1, n}; }
inline Shape xbar_shape(int n) { return {n, n + 1}; }

// Actions: g.x = g x, x.a = x a, g.y = y g^{-1}, y.a = a^{-1} y.
template <class S>
Mat<S> act_g_x(const Mat<S>& g, const Mat<S>& x) { return g * x; }
template <class S>
Mat<S> act_x_a(const Mat<S>& x, const Mat<S>& a) { return x * a; }
template <class S>
Mat<S> act_g_y(const Mat<S>& g, const Mat<S>& y) { return y * inverse(g); }
template <class S>
Mat<S> act_y_a(const Mat<S>& y, const Mat<S>& a) { return inverse(a) * y; }

/// Left (n+1) x n block.
template <class S>
Mat<S> b_map(const Mat<S>& g) { return g.leftCols(g.cols() - 1); }

/// Top n rows of g^{-1}.
template <class S>
Mat<S> bbar_map(const Mat<S>& g) {
  const Mat<S> gi = inverse(g);
  return gi.topRows(gi.rows() - 1);
}

/// diag(a, det(a)^{-1}): the Levi embedding of GL(n) into SL(n+1).
template <class S>
Mat<S> levi_embed(const Mat<S>& a) {
  const auto n = a.rows();
  Mat<S> g = Mat<S>::Zero(n + 1, n + 1);
  g.topLeftCorner(n, n) = a;
  g(n, n) = S(1) / determinant(a);
  return g;
}

/// Whether m = [[I, u], [0, 1]] (the stabilizer N of x0).
template <class S>
bool in_unipotent_n(const Mat<S>& m, double tol = 1e-10) {
  const auto n = m.rows() - 1;
  Mat<S> ref = Mat<S>::Identity(n + 1, n + 1);
  ref.topRightCorner(n, 1) = m.topRightCorner(n, 1);
  if constexpr (std::is_same_v<S, Rational>) {
    (void)tol;
    return m == ref;
  } else {
    return (m - ref).norm() <= tol * std::max(1.0, m.norm());
  }
}

/// theta(g) = conj(g)^{-T}; over Q_p the conjugation is trivial.
template <class S>
Mat<S> cartan_theta(const Mat<S>& g) { return inverse(Mat<S>(g.adjoint())); }

/// |det a|^{-(n+1)}: Jacobian of x -> x a on X.
template <class S>
abs_t<S> measure_scale(const Mat<S>& a, const FieldDescriptor& fd) {
  const auto n = static_cast<long>(a.rows());
  const abs_t<S> d = abs_det<S>(a, fd);
  if constexpr (std::is_same_v<S, Rational>) {
    Rational out = 1;
    for (long i = 0; i < n + 1; ++i) out /= d;
    return out;
  } else {
    return std::pow(d, -static_cast<double>(n + 1));
  }
}

/// Completion g in SL(n+1) with bbar_map(g) = y, built from the row w'
/// (w = w' / det[y; w'], g = [y; w]^{-1}).
template <class S>
Mat<S> unimodular_completion(const Mat<S>& y, const Mat<S>& w_prime) {
  const auto n = y.rows();
  if (y.cols() != n + 1 || w_prime.rows() != 1 || w_prime.cols() != n + 1) {
    throw std::invalid_argument("unimodular_completion: shape mismatch");
  }
  Mat<S> m(n + 1, n + 1);
  m.topRows(n) = y;
  m.row(n) = w_prime;
  const S det = determinant(m);
  if (det == S(0)) throw std::invalid_argument("unimodular_completion: [y; w'] is singular");
  m.row(n) = w_prime / det;
  return inverse(m);
}

/// Canonical completion: w' is the first of e_{n+1}, e_n, ..., e_1 making
/// [y; w'] invertible (exact), or the one with the largest |det| among them
/// (archimedean, ties broken in the same order).
template <class S>
Mat<S> unimodular_completion(const Mat<S>& y, double tol = kDefaultRankTolerance) {
  const auto n = y.rows();
  if (y.cols() != n + 1) throw std::invalid_argument("unimodular_completion: y must be n x (n+1)");
  if (!is_regular<S>(y, tol)) throw std::invalid_argument("unimodular_completion: y is rank deficient");
  Mat<S> best;
  double best_abs = -1.0;
  for (auto k = n; k >= 0; --k) {
    Mat<S> w = Mat<S>::Zero(1, n + 1);
    w(0, k) = S(1);
    Mat<S> m(n + 1, n + 1);
    m.topRows(n) = y;
    m.row(n) = w;
    const S det = determinant(m);
    if constexpr (std::is_same_v<S, Rational>) {
      if (det != 0) return unimodular_completion<S>(y, w);
    } else {
      const double a = std::abs(det);
      if (a > best_abs) {
        best_abs = a;
        best = w;
      }
    }
  }
  if constexpr (std::is_same_v<S, Rational>) {
    throw std::invalid_argument("unimodular_completion: y is rank deficient");
  } else {
    return unimodular_completion<S>(y, best);
  }
}

/// {x : y x = I_n} = {A + c z : z in F^{1 x n}}, with measure dz.
template <class S>
struct Fiber {
  Mat<S> y;
  Mat<S> A;  // (n+1) x n
  Mat<S> c;  // (n+1) x 1

  Mat<S> point(const Mat<S>& z) const { return A + c * z; }
};

template <class S>
Fiber<S> fiber_from_completion(const Mat<S>& y, const Mat<S>& g) {
  const auto n = y.rows();
  return {y, g.leftCols(n), g.rightCols(1)};
}

template <class S>
Fiber<S> fiber_param(const Mat<S>& y) {
  return fiber_from_completion<S>(y, unimodular_completion<S>(y));
}

template <class S>
Fiber<S> fiber_param(const Mat<S>& y, const Mat<S>& w_prime) {
  return fiber_from_completion<S>(y, unimodular_completion<S>(y, w_prime));
}

/// a = k1 diag(d) k2. Archimedean: SVD with d decreasing. p-adic: Smith form
/// with d_i = p^{m_i}, m ascending, k1, k2 in GL(n, Z_(p)).
template <class S>
struct KAKFactors {
  Mat<S> k1;
  Vec<abs_t<S>> diag;
  Mat<S> k2;
  std::vector<long> exponents;  // p-adic only

  Mat<S> reconstruct() const {
    Mat<S> d = Mat<S>::Zero(diag.size(), diag.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i) d(i, i) = S(diag(i));
    return k1 * d * k2;
  }
};

KAKFactors<double> kak(const MatR& a);
KAKFactors<Complex> kak(const MatC& a);
KAKFactors<Rational> kak(const MatQ& a, long p);

/// prod_i |a_i|_F^{i - (n+1)/2} for a KAK diagonal (decreasing order).
double rho_weight(const VecR& diag, const FieldDescriptor& fd);
/// p-adic: the diagonal is p^{m_i}; exact rational power of p for the
/// returned exponent, i.e. the weight is p^{rho_weight_exponent}.
Rational rho_weight_exponent(const std::vector<long>& m);

/// A KAK diagonal given by exact log-exponents: |a_i|_F = base^{r_i}.
/// Returns the exponent of base for the product formula, for the
/// functional form e^{-rho log a} and for the two lower bounds of the chain.
struct RhoChain {
  Rational product_formula;
  Rational rho_functional;
  Rational lower_mid;
  Rational lower_low;
};
RhoChain rho_chain_exponents(const std::vector<Rational>& r);

}  // namespace ups
