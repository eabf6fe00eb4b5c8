#include "ups/lattice.hpp"

#include <stdexcept>

namespace ups {
namespace {

// Splits a nonzero x as unit * p^v; returns v and writes the unit.
long split_unit(const Rational& x, long p, Rational& unit) {
  const long v = valuation(x, p);
  unit = x / p_power(p, v);
  return v;
}

void swap_cols(MatQ& m, Eigen::Index a, Eigen::Index b) {
  if (a != b) m.col(a).swap(m.col(b));
}

void swap_rows(MatQ& m, Eigen::Index a, Eigen::Index b) {
  if (a != b) m.row(a).swap(m.row(b));
}

// Solves H w = v for lower triangular H with nonzero diagonal.
VecQ forward_substitute(const MatQ& H, const VecQ& v) {
  const Eigen::Index d = H.rows();
  VecQ w(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Rational s = v(i);
    for (Eigen::Index j = 0; j < i; ++j) {
      if (H(i, j) != 0 && w(j) != 0) s -= H(i, j) * w(j);
    }
    w(i) = s / H(i, i);
  }
  return w;
}

bool integral(const VecQ& w, long p) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) != 0 && valuation(w(i), p) < 0) return false;
  }
  return true;
}

}  // namespace

bool is_padic_integral(const MatQ& M, long p) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (M(i, j) != 0 && valuation(M(i, j), p) < 0) return false;
    }
  }
  return true;
}

HermiteForm column_hermite_form(const MatQ& M, long p) {
  const Eigen::Index d = M.rows();
  const Eigen::Index k = M.cols();
  MatQ H = M;
  MatQ U = MatQ::Identity(k, k);
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index best = -1;
    long best_v = 0;
    for (Eigen::Index j = i; j < k; ++j) {
      if (H(i, j) == 0) continue;
      const long v = valuation(H(i, j), p);
      if (best < 0 || v < best_v) {
        best = j;
        best_v = v;
      }
    }
    if (best < 0) throw std::invalid_argument("lattice generators are rank deficient");
    swap_cols(H, i, best);
    swap_cols(U, i, best);
    Rational unit;
    split_unit(H(i, i), p, unit);
    H.col(i) /= unit;
    U.col(i) /= unit;
    for (Eigen::Index j = i + 1; j < k; ++j) {
      if (H(i, j) == 0) continue;
      const Rational q = H(i, j) / H(i, i);
      H.col(j) -= q * H.col(i);
      U.col(j) -= q * U.col(i);
    }
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const long m = valuation(H(i, i), p);
    const Rational pm = H(i, i);
    for (Eigen::Index j = 0; j < i; ++j) {
      const Rational r = residue(H(i, j), p, m);
      if (r == H(i, j)) continue;
      const Rational q = (H(i, j) - r) / pm;
      H.col(j) -= q * H.col(i);
      U.col(j) -= q * U.col(i);
    }
  }
  return {H.leftCols(d), U};
}

SmithForm smith_form(const MatQ& M, long p) {
  const Eigen::Index r = M.rows();
  const Eigen::Index c = M.cols();
  MatQ A = M;
  SmithForm out{MatQ::Identity(r, r), MatQ::Identity(c, c), {}};
  for (Eigen::Index t = 0; t < std::min(r, c); ++t) {
    Eigen::Index bi = -1, bj = -1;
    long bv = 0;
    for (Eigen::Index i = t; i < r; ++i) {
      for (Eigen::Index j = t; j < c; ++j) {
        if (A(i, j) == 0) continue;
        const long v = valuation(A(i, j), p);
        if (bi < 0 || v < bv) {
          bi = i;
          bj = j;
          bv = v;
        }
      }
    }
    if (bi < 0) break;
    swap_rows(A, t, bi);
    swap_rows(out.U, t, bi);
    swap_cols(A, t, bj);
    swap_cols(out.V, t, bj);
    Rational unit;
    split_unit(A(t, t), p, unit);
    A.row(t) /= unit;
    out.U.row(t) /= unit;
    for (Eigen::Index i = t + 1; i < r; ++i) {
      if (A(i, t) == 0) continue;
      const Rational q = A(i, t) / A(t, t);
      A.row(i) -= q * A.row(t);
      out.U.row(i) -= q * out.U.row(t);
    }
    for (Eigen::Index j = t + 1; j < c; ++j) {
      if (A(t, j) == 0) continue;
      const Rational q = A(t, j) / A(t, t);
      A.col(j) -= q * A.col(t);
      out.V.col(j) -= q * out.V.col(t);
    }
    out.exponents.push_back(bv);
  }
  return out;
}

Lattice Lattice::from_generators(const MatQ& B, long p) {
  if (B.rows() == 0) return Lattice(MatQ(0, 0), p);
  if (B.cols() < B.rows()) throw std::invalid_argument("lattice needs at least d generators");
  return Lattice(column_hermite_form(B, p).H, p);
}

Lattice Lattice::standard(int d, long p, long k) {
  return Lattice(MatQ::Identity(d, d) * p_power(p, k), p);
}

std::vector<long> Lattice::diagonal_exponents() const {
  std::vector<long> m(static_cast<std::size_t>(dim()));
  for (int i = 0; i < dim(); ++i) m[static_cast<std::size_t>(i)] = valuation(basis_(i, i), p_);
  return m;
}

VecQ Lattice::coordinates(const VecQ& v) const {
  if (v.size() != basis_.rows()) throw std::invalid_argument("lattice dimension mismatch");
  return forward_substitute(basis_, v);
}

bool Lattice::contains(const VecQ& v) const { return integral(coordinates(v), p_); }

Rational Lattice::volume() const {
  long s = 0;
  for (long m : diagonal_exponents()) s += m;
  return p_power(p_, -s);
}

Lattice Lattice::dual() const {
  if (dim() == 0) return *this;
  return from_generators(inverse(basis_).transpose(), p_);
}

Lattice Lattice::image(const MatQ& M) const {
  if (M.rows() != M.cols() || M.cols() != basis_.rows()) throw std::invalid_argument("image needs a square map");
  if (rank(M) != M.rows()) throw std::invalid_argument("image needs an invertible map");
  return from_generators(M * basis_, p_);
}

Lattice Lattice::sum(const Lattice& other) const {
  if (other.dim() != dim() || other.p_ != p_) throw std::invalid_argument("lattice sum: incompatible");
  if (dim() == 0) return *this;
  MatQ G(dim(), 2 * dim());
  G << basis_, other.basis_;
  return from_generators(G, p_);
}

Lattice Lattice::intersect(const Lattice& other) const {
  return dual().sum(other.dual()).dual();
}

VecQ Lattice::reduce(const VecQ& v) const {
  VecQ out = v;
  for (int i = 0; i < dim(); ++i) {
    const long m = valuation(basis_(i, i), p_);
    const Rational r = residue(out(i), p_, m);
    if (r == out(i)) continue;
    const Rational q = (out(i) - r) / basis_(i, i);
    out -= q * basis_.col(i);
  }
  return out;
}

long Lattice::inner_ball_exponent() const {
  if (dim() == 0) return 0;
  return -min_valuation(inverse(basis_), p_);
}

long Lattice::outer_ball_exponent() const {
  if (dim() == 0) return 0;
  return min_valuation(basis_, p_);
}

Coset::Coset(VecQ c, Lattice L) : center(L.reduce(c)), lattice(std::move(L)) {
  if (center.size() != lattice.dim()) throw std::invalid_argument("coset center dimension mismatch");
}

std::optional<Coset> intersect(const Coset& a, const Coset& b) {
  const int d = a.lattice.dim();
  const long p = a.lattice.prime();
  if (b.lattice.dim() != d || b.lattice.prime() != p) throw std::invalid_argument("coset intersection: incompatible");
  if (d == 0) return a;
  MatQ G(d, 2 * d);
  G << a.lattice.basis(), b.lattice.basis();
  const HermiteForm hf = column_hermite_form(G, p);
  const VecQ w = forward_substitute(hf.H, b.center - a.center);
  if (!integral(w, p)) return std::nullopt;
  const VecQ st = hf.U.leftCols(d) * w;
  const VecQ point = a.center + a.lattice.basis() * st.head(d);
  return Coset(point, a.lattice.intersect(b.lattice));
}

std::optional<Coset> affine_preimage(const Coset& coset, const VecQ& A, const MatQ& C) {
  const Lattice& L = coset.lattice;
  const long p = L.prime();
  const Eigen::Index d = C.rows();
  const Eigen::Index k = C.cols();
  if (d != L.dim() || A.size() != d) throw std::invalid_argument("affine_preimage: dimension mismatch");
  if (rank(C) != k) throw std::invalid_argument("affine_preimage: linear part is not injective");
  if (k == 0) {
    if (!coset.contains(A)) return std::nullopt;
    return Coset(VecQ(0), Lattice::from_generators(MatQ(0, 0), p));
  }
  const MatQ Binv = inverse(L.basis());
  const MatQ M = Binv * C;
  const VecQ t = Binv * (A - coset.center);
  const SmithForm sf = smith_form(M, p);
  const VecQ Ut = sf.U * t;
  for (Eigen::Index i = k; i < d; ++i) {
    if (Ut(i) != 0 && valuation(Ut(i), p) < 0) return std::nullopt;
  }
  VecQ w0(k);
  MatQ scale = MatQ::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Rational inv = p_power(p, -sf.exponents[static_cast<std::size_t>(i)]);
    w0(i) = -Ut(i) * inv;
    scale(i, i) = inv;
  }
  return Coset(sf.V * w0, Lattice::from_generators(sf.V * scale, p));
}

CosetFibration fibration(const Coset& coset, int k) {
  const int d = coset.lattice.dim();
  const long p = coset.lattice.prime();
  if (k < 0 || k > d) throw std::invalid_argument("fibration: bad split");
  const MatQ& B = coset.lattice.basis();
  const MatQ Baa = B.topLeftCorner(k, k);
  const MatQ Bza = B.bottomLeftCorner(d - k, k);
  const MatQ Bzz = B.bottomRightCorner(d - k, d - k);
  MatQ section = k == 0 ? MatQ(d - k, 0) : MatQ(Bza * inverse(Baa));
  return {coset.center.head(k), Lattice::from_generators(Baa, p), coset.center.tail(d - k), std::move(section),
          Lattice::from_generators(Bzz, p)};
}

}  // namespace ups
