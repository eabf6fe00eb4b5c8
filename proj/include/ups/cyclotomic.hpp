#pragma once

// Exact elements of Q(zeta_{p^M}) in the power basis, reduced to the
// smallest conductor, plus p-power scaled values p^e * c with e rational.

#include "ups/rational.hpp"

#include <complex>
#include <string>
#include <vector>

namespace ups {

class CyclotomicValue {
 public:
  /// Zero of Q(zeta_p^0) = Q for the prime p.
  explicit CyclotomicValue(long p = 2);

  static CyclotomicValue rational(long p, const Rational& value);
  /// zeta_{p^M}^r.
  static CyclotomicValue root_of_unity(long p, long M, const BigInt& r);

  long prime() const { return p_; }
  /// Conductor is p^M.
  long conductor_exponent() const { return M_; }
  BigInt conductor() const;
  /// Length phi(p^M) coefficient vector in the power basis of zeta_{p^M}.
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  /// The value when it lies in Q (conductor 1).
  bool is_rational() const { return M_ == 0; }
  Rational rational_value() const;

  CyclotomicValue conj() const;
  std::complex<double> to_complex() const;

  CyclotomicValue& operator+=(const CyclotomicValue& w);
  CyclotomicValue& operator-=(const CyclotomicValue& w);
  CyclotomicValue& operator*=(const CyclotomicValue& w);
  CyclotomicValue& operator*=(const Rational& s);

  friend CyclotomicValue operator+(CyclotomicValue v, const CyclotomicValue& w) { return v += w; }
  friend CyclotomicValue operator-(CyclotomicValue v, const CyclotomicValue& w) { return v -= w; }
  friend CyclotomicValue operator*(CyclotomicValue v, const CyclotomicValue& w) { return v *= w; }
  friend CyclotomicValue operator*(CyclotomicValue v, const Rational& s) { return v *= s; }
  friend CyclotomicValue operator*(const Rational& s, CyclotomicValue v) { return v *= s; }
  CyclotomicValue operator-() const;

  friend bool operator==(const CyclotomicValue& v, const CyclotomicValue& w);

 private:
  CyclotomicValue(long p, long M, std::vector<Rational> coeffs);
  void check_prime(const CyclotomicValue& w) const;
  /// Coefficients re-expressed at conductor p^target (target >= M_).
  std::vector<Rational> lifted(long target) const;
  void canonicalize();

  long p_;
  long M_;
  std::vector<Rational> coeffs_;
};

/// p^exponent * value, exponent rational; used where half-integral powers
/// of |det|_p appear. Canonical: exponent in [0,1), zero has exponent 0.
class ScaledCyclotomic {
 public:
  explicit ScaledCyclotomic(long p = 2) : exponent_(0), value_(p) {}
  ScaledCyclotomic(const Rational& exponent, CyclotomicValue value);
  explicit ScaledCyclotomic(CyclotomicValue value) : ScaledCyclotomic(Rational(0), std::move(value)) {}

  const Rational& exponent() const { return exponent_; }
  const CyclotomicValue& value() const { return value_; }
  long prime() const { return value_.prime(); }
  bool is_zero() const { return value_.is_zero(); }

  ScaledCyclotomic conj() const { return ScaledCyclotomic(exponent_, value_.conj()); }
  std::complex<double> to_complex() const;

  ScaledCyclotomic& operator*=(const ScaledCyclotomic& w);
  /// Requires commensurable exponents (equal modulo Z) unless one side is zero.
  ScaledCyclotomic& operator+=(const ScaledCyclotomic& w);

  friend ScaledCyclotomic operator*(ScaledCyclotomic v, const ScaledCyclotomic& w) { return v *= w; }
  friend ScaledCyclotomic operator+(ScaledCyclotomic v, const ScaledCyclotomic& w) { return v += w; }
  friend bool operator==(const ScaledCyclotomic& v, const ScaledCyclotomic& w) {
    return v.exponent_ == w.exponent_ && v.value_ == w.value_;
  }

 private:
  void canonicalize();

  Rational exponent_;
  CyclotomicValue value_;
};

/// Additive character of Q_p: x -> exp(2 pi i {x}_p), trivial exactly on Z_p.
CyclotomicValue padic_character(const Rational& x, long p);

/// "c0 + c1*z + ... (z = zeta_N)"; plain rationals print as such.
std::string to_string(const CyclotomicValue& v);
/// "p^(e) * (...)" when the exponent is nonzero.
std::string to_string(const ScaledCyclotomic& v);

}  // namespace ups
