#include "ups/matrix.hpp"

namespace ups {
namespace {

// Row echelon reduction in place; returns (rank, sign-adjusted determinant
// of the leading square block when square).
struct Elimination {
  int rank = 0;
  Rational det = 1;
};

Elimination eliminate(MatQ& m) {
  Elimination out;
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (m(i, c) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) {
      out.det = 0;
      continue;
    }
    if (pivot != r) {
      m.row(pivot).swap(m.row(r));
      out.det = -out.det;
    }
    const Rational pv = m(r, c);
    out.det *= pv;
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (m(i, c) == 0) continue;
      const Rational f = m(i, c) / pv;
      for (Eigen::Index j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  out.rank = static_cast<int>(r);
  if (out.rank < std::min(rows, cols)) out.det = 0;
  return out;
}

}  // namespace

Rational determinant(const MatQ& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (a.rows() == 0) return Rational(1);
  MatQ m = a;
  return eliminate(m).det;
}

int rank(const MatQ& a) {
  MatQ m = a;
  return eliminate(m).rank;
}

MatQ inverse(const MatQ& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inverse of a non-square matrix");
  MatQ aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n) = MatQ::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = c; i < n; ++i) {
      if (aug(i, c) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) throw std::domain_error("inverse of a singular matrix");
    if (pivot != c) aug.row(pivot).swap(aug.row(c));
    const Rational pv = aug(c, c);
    for (Eigen::Index j = 0; j < 2 * n; ++j) aug(c, j) /= pv;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == c || aug(i, c) == 0) continue;
      const Rational f = aug(i, c);
      for (Eigen::Index j = 0; j < 2 * n; ++j) aug(i, j) -= f * aug(c, j);
    }
  }
  return aug.rightCols(n);
}

VecQ solve(const MatQ& a, const VecQ& b) { return inverse(a) * b; }

MatR inverse(const MatR& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  Eigen::FullPivLU<MatR> lu(a);
  if (!lu.isInvertible()) throw std::domain_error("inverse of a singular matrix");
  return lu.inverse();
}

MatC inverse(const MatC& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  Eigen::FullPivLU<MatC> lu(a);
  if (!lu.isInvertible()) throw std::domain_error("inverse of a singular matrix");
  return lu.inverse();
}

double smallest_singular_value(const MatR& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatR> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double smallest_singular_value(const MatC& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatC> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

int rank(const MatR& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<MatR> svd(a);
  return static_cast<int>((svd.singularValues().array() > tol).count());
}

int rank(const MatC& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<MatC> svd(a);
  return static_cast<int>((svd.singularValues().array() > tol).count());
}

long min_valuation(const MatQ& a, long p) {
  long v = kInfiniteValuation;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0) v = std::min(v, valuation(a(i, j), p));
    }
  }
  return v;
}

MatQ parse_matrix_q(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return MatQ(0, 0);
  MatQ out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::invalid_argument("ragged matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_rational(rows[i][j]);
    }
  }
  return out;
}

}  // namespace ups
