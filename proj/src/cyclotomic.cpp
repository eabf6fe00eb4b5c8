#include "ups/cyclotomic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ups {
namespace {

long ipow(long p, long k) {
  long out = 1;
  for (long i = 0; i < k; ++i) out *= p;
  return out;
}

long totient(long p, long M) { return M == 0 ? 1 : ipow(p, M - 1) * (p - 1); }

// Reduce a polynomial in zeta (length p^M, exponents mod p^M) onto the power
// basis of length phi(p^M) using zeta^((p-1)p^(M-1)+r) = -sum_j zeta^(j p^(M-1)+r).
std::vector<Rational> reduce_poly(long p, long M, std::vector<Rational> poly) {
  const long N = ipow(p, M);
  const long phi = totient(p, M);
  if (M == 0) return poly;
  const long step = N / p;
  for (long k = N - 1; k >= phi; --k) {
    if (poly[k] == 0) continue;
    const Rational c = poly[k];
    const long r = k - phi;
    for (long j = 0; j <= p - 2; ++j) poly[j * step + r] -= c;
    poly[k] = 0;
  }
  poly.resize(static_cast<std::size_t>(phi));
  return poly;
}

}  // namespace

CyclotomicValue::CyclotomicValue(long p) : p_(p), M_(0), coeffs_(1, Rational(0)) {}

CyclotomicValue::CyclotomicValue(long p, long M, std::vector<Rational> coeffs)
    : p_(p), M_(M), coeffs_(std::move(coeffs)) {
  canonicalize();
}

CyclotomicValue CyclotomicValue::rational(long p, const Rational& value) {
  return CyclotomicValue(p, 0, {value});
}

CyclotomicValue CyclotomicValue::root_of_unity(long p, long M, const BigInt& r) {
  if (M < 0) throw std::invalid_argument("root_of_unity: negative conductor exponent");
  const long N = ipow(p, M);
  BigInt red = r % N;
  if (red < 0) red += N;
  std::vector<Rational> poly(static_cast<std::size_t>(N), Rational(0));
  poly[static_cast<std::size_t>(red.convert_to<long>())] = 1;
  return CyclotomicValue(p, M, reduce_poly(p, M, std::move(poly)));
}

BigInt CyclotomicValue::conductor() const {
  return boost::multiprecision::pow(BigInt(p_), static_cast<unsigned>(M_));
}

bool CyclotomicValue::is_zero() const {
  for (const auto& c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

Rational CyclotomicValue::rational_value() const {
  if (M_ != 0) throw std::domain_error("cyclotomic value is not rational");
  return coeffs_[0];
}

void CyclotomicValue::check_prime(const CyclotomicValue& w) const {
  if (w.p_ != p_) throw std::invalid_argument("cyclotomic values over different primes");
}

std::vector<Rational> CyclotomicValue::lifted(long target) const {
  if (target == M_) return coeffs_;
  std::vector<Rational> out(static_cast<std::size_t>(totient(p_, target)), Rational(0));
  const long stride = ipow(p_, target - M_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    out[i * static_cast<std::size_t>(stride)] = coeffs_[i];
  }
  return out;
}

void CyclotomicValue::canonicalize() {
  if (is_zero()) {
    M_ = 0;
    coeffs_.assign(1, Rational(0));
    return;
  }
  while (M_ >= 1) {
    if (M_ == 1) {
      bool in_q = true;
      for (std::size_t i = 1; i < coeffs_.size(); ++i) in_q = in_q && coeffs_[i] == 0;
      if (!in_q) return;
      coeffs_.resize(1);
      M_ = 0;
      return;
    }
    bool descends = true;
    for (std::size_t i = 0; i < coeffs_.size() && descends; ++i) {
      if (i % static_cast<std::size_t>(p_) != 0 && coeffs_[i] != 0) descends = false;
    }
    if (!descends) return;
    std::vector<Rational> next(coeffs_.size() / static_cast<std::size_t>(p_));
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = coeffs_[i * static_cast<std::size_t>(p_)];
    coeffs_ = std::move(next);
    --M_;
  }
}

CyclotomicValue CyclotomicValue::conj() const {
  const long N = ipow(p_, M_);
  std::vector<Rational> poly(static_cast<std::size_t>(N), Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    poly[static_cast<std::size_t>((N - static_cast<long>(i)) % N)] += coeffs_[i];
  }
  return CyclotomicValue(p_, M_, reduce_poly(p_, M_, std::move(poly)));
}

std::complex<double> CyclotomicValue::to_complex() const {
  const double N = std::pow(static_cast<double>(p_), static_cast<double>(M_));
  std::complex<double> out(0.0, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    out += to_double(coeffs_[i]) * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) / N);
  }
  return out;
}

CyclotomicValue& CyclotomicValue::operator+=(const CyclotomicValue& w) {
  check_prime(w);
  const long M = std::max(M_, w.M_);
  std::vector<Rational> a = lifted(M);
  const std::vector<Rational> b = w.lifted(M);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  M_ = M;
  coeffs_ = std::move(a);
  canonicalize();
  return *this;
}

CyclotomicValue& CyclotomicValue::operator-=(const CyclotomicValue& w) { return *this += -w; }

CyclotomicValue CyclotomicValue::operator-() const {
  CyclotomicValue out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

CyclotomicValue& CyclotomicValue::operator*=(const CyclotomicValue& w) {
  check_prime(w);
  if (w.M_ == 0) return *this *= w.coeffs_[0];
  if (M_ == 0) {
    const Rational s = coeffs_[0];
    *this = w;
    return *this *= s;
  }
  const long M = std::max(M_, w.M_);
  const long N = ipow(p_, M);
  const std::vector<Rational> a = lifted(M);
  const std::vector<Rational> b = w.lifted(M);
  std::vector<Rational> poly(static_cast<std::size_t>(N), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      poly[(i + j) % static_cast<std::size_t>(N)] += a[i] * b[j];
    }
  }
  M_ = M;
  coeffs_ = reduce_poly(p_, M, std::move(poly));
  canonicalize();
  return *this;
}

CyclotomicValue& CyclotomicValue::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  canonicalize();
  return *this;
}

bool operator==(const CyclotomicValue& v, const CyclotomicValue& w) {
  return v.p_ == w.p_ && v.M_ == w.M_ && v.coeffs_ == w.coeffs_;
}

ScaledCyclotomic::ScaledCyclotomic(const Rational& exponent, CyclotomicValue value)
    : exponent_(exponent), value_(std::move(value)) {
  canonicalize();
}

void ScaledCyclotomic::canonicalize() {
  if (value_.is_zero()) {
    exponent_ = 0;
    return;
  }
  // floor of the exponent moves into the exact part
  const BigInt num = numerator(exponent_);
  const BigInt den = denominator(exponent_);
  BigInt fl = num / den;
  if (num < 0 && fl * den != num) fl -= 1;
  if (fl != 0) {
    value_ *= p_power(value_.prime(), fl.convert_to<long>());
    exponent_ -= Rational(fl);
  }
}

std::complex<double> ScaledCyclotomic::to_complex() const {
  return std::pow(static_cast<double>(prime()), to_double(exponent_)) * value_.to_complex();
}

ScaledCyclotomic& ScaledCyclotomic::operator*=(const ScaledCyclotomic& w) {
  exponent_ += w.exponent_;
  value_ *= w.value_;
  canonicalize();
  return *this;
}

ScaledCyclotomic& ScaledCyclotomic::operator+=(const ScaledCyclotomic& w) {
  if (w.is_zero()) return *this;
  if (is_zero()) return *this = w;
  if (exponent_ != w.exponent_) {
    throw std::domain_error("sum of incommensurable p-power scaled values");
  }
  value_ += w.value_;
  canonicalize();
  return *this;
}

CyclotomicValue padic_character(const Rational& x, long p) {
  const Rational frac = fractional_part(x, p);
  if (frac == 0) return CyclotomicValue::rational(p, Rational(1));
  const long M = -valuation(frac, p);
  const Rational r = frac * p_power(p, M);
  return CyclotomicValue::root_of_unity(p, M, numerator(r));
}

std::string to_string(const CyclotomicValue& v) {
  if (v.is_rational()) return to_string(v.rational_value());
  std::string out;
  const auto& c = v.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    std::string coeff = to_string(abs(c[i]));
    const bool neg = c[i] < 0;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (i == 0) {
      out += coeff;
      continue;
    }
    if (coeff != "1") out += coeff + "*";
    out += i == 1 ? "z" : "z^" + std::to_string(i);
  }
  return out + " (z = zeta_" + v.conductor().str() + ")";
}

std::string to_string(const ScaledCyclotomic& v) {
  const std::string body = to_string(v.value());
  if (v.exponent() == 0 || v.is_zero()) return body;
  return std::to_string(v.prime()) + "^(" + to_string(v.exponent()) + ") * (" + body + ")";
}

}  // namespace ups
