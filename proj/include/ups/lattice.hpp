#pragma once

// Full-rank Z_p-lattices in Q_p^d with exact rational bases: canonical
// Hermite normal form, Smith normal form over Z_(p), duals, sums,
// intersections, cosets and affine preimages.
//
// All computations stay in Q; Z_(p) (rationals without p in the
// denominator) plays the role of Z_p, which is enough for lattices spanned
// by rational vectors.

#include "ups/matrix.hpp"

#include <optional>
#include <vector>

namespace ups {

/// Column Hermite form of a rank-d matrix M (d x k, k >= d) over Z_(p):
/// M U = [H | 0] with H lower triangular, H_ii = p^{m_i}, entries left of the
/// diagonal reduced into [0, p^{m_i}) and U in GL(k, Z_(p)).
struct HermiteForm {
  MatQ H;
  MatQ U;
};
HermiteForm column_hermite_form(const MatQ& M, long p);

/// U M V = D over Z_(p) with D "diagonal" (rows x cols), D_ii = p^{m_i},
/// m ascending, zeros after the rank; U, V in GL(Z_(p)).
struct SmithForm {
  MatQ U;
  MatQ V;
  std::vector<long> exponents;  // length rank
};
SmithForm smith_form(const MatQ& M, long p);

/// Whether every entry lies in Z_(p).
bool is_padic_integral(const MatQ& M, long p);

class Lattice {
 public:
  /// Lattice spanned by the columns of B (d x k, rank d).
  static Lattice from_generators(const MatQ& B, long p);
  /// p^k Z_p^d.
  static Lattice standard(int d, long p, long k = 0);

  long prime() const { return p_; }
  int dim() const { return static_cast<int>(basis_.rows()); }
  /// Canonical basis (columns), lower triangular Hermite form.
  const MatQ& basis() const { return basis_; }
  /// Exponents m_i with diagonal entries p^{m_i}.
  std::vector<long> diagonal_exponents() const;

  bool contains(const VecQ& v) const;
  /// Haar volume for the normalization vol(Z_p^d) = 1.
  Rational volume() const;

  /// {y : y^T l in Z_p for all l in L}.
  Lattice dual() const;
  /// M L for invertible M.
  Lattice image(const MatQ& M) const;
  Lattice sum(const Lattice& other) const;
  Lattice intersect(const Lattice& other) const;

  /// Coordinates w with v = B w (so v in L iff w integral).
  VecQ coordinates(const VecQ& v) const;
  /// Canonical representative of v + L.
  VecQ reduce(const VecQ& v) const;
  /// Smallest j with p^j Z_p^d contained in L (the largest standard ball
  /// inside L has radius p^{-j}).
  long inner_ball_exponent() const;
  /// Largest j with L contained in p^j Z_p^d.
  long outer_ball_exponent() const;

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.p_ == b.p_ && a.basis_ == b.basis_; }

 private:
  Lattice(MatQ basis, long p) : basis_(std::move(basis)), p_(p) {}
  MatQ basis_;
  long p_;
};

struct Coset {
  VecQ center;
  Lattice lattice;

  /// Reduces the center to the canonical representative.
  Coset(VecQ c, Lattice L);
  bool contains(const VecQ& v) const { return lattice.contains(v - center); }
  friend bool operator==(const Coset& a, const Coset& b) {
    return a.lattice == b.lattice && a.center == b.center;
  }
};

std::optional<Coset> intersect(const Coset& a, const Coset& b);

/// {z : A + C z in coset} for C (d x k) injective; empty or a coset of a
/// full-rank lattice in Q_p^k.
std::optional<Coset> affine_preimage(const Coset& coset, const VecQ& A, const MatQ& C);

/// Splitting of a coset in coordinates (a, z) with a = first k coordinates.
/// Points are a in center_a + proj, z in fiber_center + section (a - center_a)
/// + fiber.
struct CosetFibration {
  VecQ center_a;
  Lattice proj;
  VecQ fiber_center;
  MatQ section;  // (d-k) x k
  Lattice fiber;
};
CosetFibration fibration(const Coset& coset, int k);

}  // namespace ups
