#include "ups/geometry.hpp"

namespace ups {
namespace {

template <class M>
auto svd_kak(const M& a) {
  using S = typename M::Scalar;
  if (a.rows() != a.cols() || a.rows() == 0) throw std::invalid_argument("kak: square input expected");
  Eigen::JacobiSVD<M> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VecR s = svd.singularValues();
  if (s(s.size() - 1) <= kDefaultRankTolerance * std::max(1.0, s(0))) {
    throw std::invalid_argument("kak: singular input");
  }
  KAKFactors<S> out;
  out.k1 = svd.matrixU();
  out.diag = s;
  out.k2 = svd.matrixV().adjoint();
  return out;
}

}  // namespace

KAKFactors<double> kak(const MatR& a) { return svd_kak(a); }
KAKFactors<Complex> kak(const MatC& a) { return svd_kak(a); }

KAKFactors<Rational> kak(const MatQ& a, long p) {
  const auto n = a.rows();
  if (a.cols() != n || n == 0) throw std::invalid_argument("kak: square input expected");
  const SmithForm sf = smith_form(a, p);
  if (static_cast<Eigen::Index>(sf.exponents.size()) != n) throw std::invalid_argument("kak: singular input");
  KAKFactors<Rational> out;
  out.k1 = inverse(sf.U);
  out.k2 = inverse(sf.V);
  out.diag.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.diag(i) = p_power(p, sf.exponents[static_cast<std::size_t>(i)]);
  out.exponents = sf.exponents;
  return out;
}

double rho_weight(const VecR& diag, const FieldDescriptor& fd) {
  const auto n = static_cast<double>(diag.size());
  const double dF = fd.kind() == FieldKind::complex ? 2.0 : 1.0;
  double log_w = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0)) throw std::invalid_argument("rho_weight: diagonal entries must be positive");
    log_w += (static_cast<double>(i + 1) - (n + 1) / 2) * dF * std::log(diag(i));
  }
  return std::exp(log_w);
}

Rational rho_weight_exponent(const std::vector<long>& m) {
  const long n = static_cast<long>(m.size());
  Rational e = 0;
  for (long i = 0; i < n; ++i) e += (Rational(i + 1) - Rational(n + 1, 2)) * Rational(-m[static_cast<std::size_t>(i)]);
  return e;
}

RhoChain rho_chain_exponents(const std::vector<Rational>& r) {
  const long n = static_cast<long>(r.size());
  RhoChain out{0, 0, 0, 0};
  Rational abs_sum = 0;
  for (long i = 0; i < n; ++i) {
    const Rational& ri = r[static_cast<std::size_t>(i)];
    out.product_formula += (Rational(i + 1) - Rational(n + 1, 2)) * ri;
    out.rho_functional -= Rational(n + 1 - 2 * (i + 1), 2) * ri;
    abs_sum += abs(ri);
  }
  out.lower_mid = -Rational(n - 1, 2) * abs_sum;
  out.lower_low = -Rational(n + 1, 2) * abs_sum;
  return out;
}

}  // namespace ups
