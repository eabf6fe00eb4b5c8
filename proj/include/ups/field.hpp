#pragma once

// The local fields R, C and Q_p: descriptors, normalized absolute values
// and the fixed additive characters.
//
// Conventions:
//  * |x|_R = |x|, |z|_C = conj(z) z (the module, squared modulus),
//    |x|_p = p^{-v_p(x)}.
//  * archimedean character chi(s) = exp(-2 pi i Re s);
//    p-adic character chi(s) = exp(+2 pi i {s}_p), conductor Z_p.

#include "ups/cyclotomic.hpp"
#include "ups/rational.hpp"

#include <complex>
#include <string>

namespace ups {

enum class FieldKind { real, complex, padic };

class FieldDescriptor {
 public:
  static FieldDescriptor real() { return FieldDescriptor(FieldKind::real, 0); }
  static FieldDescriptor complex() { return FieldDescriptor(FieldKind::complex, 0); }
  /// Throws std::invalid_argument unless p is prime.
  static FieldDescriptor padic(long p);

  FieldKind kind() const { return kind_; }
  bool archimedean() const { return kind_ != FieldKind::padic; }
  long prime() const { return p_; }
  long residue_cardinality() const { return p_; }
  /// dim_R F; throws for the p-adic field.
  int real_dimension() const;
  /// Real coordinates per scalar (1 for R and Q_p, 2 for C).
  int coordinates_per_scalar() const { return kind_ == FieldKind::complex ? 2 : 1; }
  std::string name() const;

  friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;

 private:
  FieldDescriptor(FieldKind kind, long p) : kind_(kind), p_(p) {}
  FieldKind kind_;
  long p_;
};

using Complex = std::complex<double>;

inline double abs_norm(double x) { return x < 0 ? -x : x; }
inline double abs_norm(const Complex& z) { return std::norm(z); }
Rational abs_norm(const Rational& x, long p);

/// exp(-2 pi i Re s).
Complex add_char(double s);
Complex add_char(const Complex& s);
inline CyclotomicValue add_char(const Rational& s, long p) { return padic_character(s, p); }

/// The turn count t in [0,1) with add_char(s) = exp(2 pi i t), reduced
/// from -Re s.
double char_phase_turns(double re_s);

}  // namespace ups
