#pragma once

// Exact rational arithmetic and p-adic helpers on Q.

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace ups {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Valuation reported for zero.
inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max();

bool is_prime(long p);

/// p-adic valuation; kInfiniteValuation for zero.
long valuation(const BigInt& x, long p);
long valuation(const Rational& x, long p);

/// p^k for any integer k.
Rational p_power(long p, long k);

/// Canonical representative of x modulo p^m Z_p: the unique r in Z[1/p]
/// with 0 <= r < p^m and v_p(x - r) >= m.
Rational residue(const Rational& x, long p, long m);

/// p-adic fractional part {x}_p = residue(x, p, 0), in [0, 1).
inline Rational fractional_part(const Rational& x, long p) { return residue(x, p, 0); }

/// Modular inverse of u modulo m (u coprime to m).
BigInt mod_inverse(const BigInt& u, const BigInt& m);

/// "num/den" (always with an explicit denominator).
std::string to_string(const Rational& x);

/// Accepts "a", "a/b", "-a/b", and decimal strings such as "0.25".
Rational parse_rational(std::string_view text);

double to_double(const Rational& x);

inline Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

}  // namespace ups
