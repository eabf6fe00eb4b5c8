#include "ups/rational.hpp"

#include <gmp.h>

#include <stdexcept>

namespace ups {

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

long valuation(const BigInt& x, long p) {
  if (x == 0) return kInfiniteValuation;
  mpz_t rest, prime;
  mpz_init(rest);
  mpz_init_set_si(prime, p);
  const long v = static_cast<long>(mpz_remove(rest, x.backend().data(), prime));
  mpz_clear(rest);
  mpz_clear(prime);
  return v;
}

long valuation(const Rational& x, long p) {
  if (x == 0) return kInfiniteValuation;
  return valuation(BigInt(numerator(x)), p) - valuation(BigInt(denominator(x)), p);
}

Rational p_power(long p, long k) {
  const BigInt base = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k < 0 ? -k : k));
  if (k >= 0) return Rational(base);
  return Rational(BigInt(1), base);
}

BigInt mod_inverse(const BigInt& u, const BigInt& m) {
  BigInt out;
  if (mpz_invert(out.backend().data(), u.backend().data(), m.backend().data()) == 0) {
    throw std::domain_error("mod_inverse: not invertible");
  }
  return out;
}

Rational residue(const Rational& x, long p, long m) {
  if (x == 0) return Rational(0);
  const long v = valuation(x, p);
  if (v >= m) return Rational(0);
  const long s = v < 0 ? -v : 0;
  // x * p^s lies in Z_(p); reduce it modulo p^(m+s) and divide back.
  const Rational scaled = x * p_power(p, s);
  const BigInt num = numerator(scaled);
  const BigInt den = denominator(scaled);
  const BigInt modulus = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(m + s));
  BigInt r = (num * mod_inverse(den, modulus)) % modulus;
  if (r < 0) r += modulus;
  return Rational(r) / p_power(p, s);
}

std::string to_string(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const BigInt num(s.substr(0, slash));
      const BigInt den(s.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Rational(num, den);
    }
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
      const bool negative = s[0] == '-';
      const std::string whole = s.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
      const std::string frac = s.substr(dot + 1);
      const BigInt num(whole.empty() ? std::string("0") : whole);
      const BigInt frac_num(frac.empty() ? std::string("0") : frac);
      const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
      Rational out = Rational(num) + Rational(frac_num, scale);
      return negative ? Rational(-out) : out;
    }
    return Rational(BigInt(s));
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace ups
