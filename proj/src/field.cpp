#include "ups/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ups {

FieldDescriptor FieldDescriptor::padic(long p) {
  if (!is_prime(p)) throw std::invalid_argument("p-adic field needs a prime, got " + std::to_string(p));
  return FieldDescriptor(FieldKind::padic, p);
}

int FieldDescriptor::real_dimension() const {
  switch (kind_) {
    case FieldKind::real: return 1;
    case FieldKind::complex: return 2;
    case FieldKind::padic: break;
  }
  throw std::logic_error("real dimension undefined for Q_p");
}

std::string FieldDescriptor::name() const {
  switch (kind_) {
    case FieldKind::real: return "R";
    case FieldKind::complex: return "C";
    case FieldKind::padic: return "Q" + std::to_string(p_);
  }
  return "?";
}

Rational abs_norm(const Rational& x, long p) {
  if (x == 0) return Rational(0);
  return p_power(p, -valuation(x, p));
}

double char_phase_turns(double re_s) {
  double t = std::fmod(-re_s, 1.0);
  if (t < 0) t += 1.0;
  return t;
}

Complex add_char(double s) { return std::polar(1.0, -2.0 * std::numbers::pi * std::fmod(s, 1.0)); }

Complex add_char(const Complex& s) { return add_char(s.real()); }

}  // namespace ups
