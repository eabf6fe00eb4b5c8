#include "ups/sb_function.hpp"

#include "ups/field.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ups {
namespace {

Rational dot(const VecQ& a, const VecQ& b) {
  Rational s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != 0 && b(i) != 0) s += a(i) * b(i);
  }
  return s;
}

bool is_zero_vec(const VecQ& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0) return false;
  }
  return true;
}

long vec_min_valuation(const VecQ& v, long p) {
  long m = kInfiniteValuation;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0) m = std::min(m, valuation(v(i), p));
  }
  return m;
}

}  // namespace

SBFunction::SBFunction(long p, Shape shape) : p_(p), shape_(shape), scale_(0) {
  if (!is_prime(p)) throw std::invalid_argument("SBFunction needs a prime");
}

SBFunction SBFunction::indicator(const Coset& coset, Shape shape) {
  SBFunction f(coset.lattice.prime(), shape);
  f.add_term(CyclotomicValue::rational(f.p_, 1), VecQ::Zero(shape.entries()), coset);
  return f;
}

SBFunction SBFunction::ball(long p, Shape shape, long k) {
  return indicator(Coset(VecQ::Zero(shape.entries()), Lattice::standard(shape.entries(), p, k)), shape);
}

void SBFunction::add_term(const CyclotomicValue& coeff, const VecQ& twist, const Coset& coset) {
  if (coset.lattice.dim() != dim() || twist.size() != dim()) throw std::invalid_argument("SB term: dimension mismatch");
  if (coset.lattice.prime() != p_ || coeff.prime() != p_) throw std::invalid_argument("SB term: prime mismatch");
  if (coeff.is_zero()) return;
  terms_.push_back({coeff, twist, coset});
}

void SBFunction::check_compatible(const SBFunction& g) const {
  if (g.p_ != p_ || g.dim() != dim()) throw std::invalid_argument("SB functions on different spaces");
}

void SBFunction::set_scale(const Rational& s) {
  const BigInt num = numerator(s), den = denominator(s);
  BigInt fl = num / den;
  if (num < 0 && fl * den != num) fl -= 1;
  const Rational frac = s - Rational(fl);
  if (fl != 0) {
    const Rational factor = p_power(p_, fl.convert_to<long>());
    for (auto& t : terms_) t.coeff *= factor;
  }
  scale_ = frac;
}

ScaledCyclotomic SBFunction::evaluate_coords(const VecQ& xi) const {
  if (xi.size() != dim()) throw std::invalid_argument("SB evaluation: point is not in the domain space");
  CyclotomicValue s(p_);
  for (const auto& t : terms_) {
    if (!t.coset.contains(xi)) continue;
    s += t.coeff * padic_character(dot(t.twist, xi), p_);
  }
  return ScaledCyclotomic(scale_, s);
}

ScaledCyclotomic SBFunction::evaluate(const MatQ& x) const {
  if (x.rows() != shape_.rows || x.cols() != shape_.cols) {
    throw std::invalid_argument("SB evaluation: point is not in the domain space");
  }
  return evaluate_coords(to_coordinates<Rational>(x));
}

ScaledCyclotomic SBFunction::integral() const {
  CyclotomicValue s(p_);
  for (const auto& t : terms_) {
    if (!t.coset.lattice.dual().contains(t.twist)) continue;
    s += t.coeff * padic_character(dot(t.twist, t.coset.center), p_) * t.coset.lattice.volume();
  }
  return ScaledCyclotomic(scale_, s);
}

SBFunction SBFunction::pullback_affine(const VecQ& A, const MatQ& C, Shape shape) const {
  if (C.rows() != dim() || A.size() != dim() || C.cols() != shape.entries()) {
    throw std::invalid_argument("SB pullback: dimension mismatch");
  }
  SBFunction out(p_, shape);
  out.scale_ = scale_;
  const MatQ Ct = C.transpose();
  for (const auto& t : terms_) {
    const auto pre = affine_preimage(t.coset, A, C);
    if (!pre) continue;
    out.add_term(t.coeff * padic_character(dot(t.twist, A), p_), Ct * t.twist, *pre);
  }
  return out.simplified();
}

SBFunction SBFunction::pullback_linear(const MatQ& C, Shape shape) const {
  return pullback_affine(VecQ::Zero(dim()), C, shape);
}

SBFunction SBFunction::marginal(int keep, Shape shape) const {
  if (keep < 0 || keep > dim() || shape.entries() != keep) throw std::invalid_argument("SB marginal: bad split");
  SBFunction out(p_, shape);
  out.scale_ = scale_;
  for (const auto& t : terms_) {
    const CosetFibration fb = fibration(t.coset, keep);
    const VecQ ua = t.twist.head(keep), uz = t.twist.tail(dim() - keep);
    if (!fb.fiber.dual().contains(uz)) continue;
    const VecQ shift = fb.fiber_center - fb.section * fb.center_a;
    const CyclotomicValue c = t.coeff * fb.fiber.volume() * padic_character(dot(uz, shift), p_);
    const VecQ twist = ua + fb.section.transpose() * uz;
    out.add_term(c, twist, Coset(fb.center_a, fb.proj));
  }
  return out.simplified();
}

SBFunction SBFunction::times_character(const VecQ& freq) const {
  if (freq.size() != dim()) throw std::invalid_argument("SB character: dimension mismatch");
  SBFunction out = *this;
  for (auto& t : out.terms_) t.twist += freq;
  return out.simplified();
}

SBFunction SBFunction::scaled(const ScaledCyclotomic& s) const {
  if (s.prime() != p_) throw std::invalid_argument("SB scale: prime mismatch");
  SBFunction out = *this;
  for (auto& t : out.terms_) t.coeff *= s.value();
  out.terms_.erase(std::remove_if(out.terms_.begin(), out.terms_.end(), [](const SBTerm& t) { return t.coeff.is_zero(); }),
                   out.terms_.end());
  out.set_scale(scale_ + s.exponent());
  return out;
}

SBFunction SBFunction::scaled(const Rational& s) const {
  return scaled(ScaledCyclotomic(CyclotomicValue::rational(p_, s)));
}

SBFunction SBFunction::conj() const {
  SBFunction out = *this;
  for (auto& t : out.terms_) {
    t.coeff = t.coeff.conj();
    t.twist = -t.twist;
  }
  return out.simplified();
}

SBFunction SBFunction::fourier(const MatQ& P, int sign, Shape out_shape) const {
  if (P.rows() != dim() || P.cols() != dim() || out_shape.entries() != dim()) {
    throw std::invalid_argument("SB fourier: pairing mismatch");
  }
  const MatQ PinvT = inverse(P).transpose();
  const Rational s(sign);
  SBFunction out(p_, out_shape);
  out.scale_ = scale_;
  for (const auto& t : terms_) {
    const Lattice& L = t.coset.lattice;
    const CyclotomicValue c = t.coeff * L.volume() * padic_character(dot(t.twist, t.coset.center), p_);
    const VecQ center = -s * (PinvT * t.twist);
    const Lattice support = L.dual().image(PinvT);
    out.add_term(c, VecQ(s * (P * t.coset.center)), Coset(center, support));
  }
  return out.simplified();
}

SBFunction SBFunction::simplified() const {
  SBFunction out(p_, shape_);
  out.scale_ = scale_;
  for (const auto& t : terms_) {
    const Lattice dual = t.coset.lattice.dual();
    const VecQ reduced = dual.reduce(t.twist);
    CyclotomicValue c = t.coeff;
    // chi(u^T xi) = chi(u_red^T xi) chi((u - u_red)^T c) on the coset
    const VecQ lambda = t.twist - reduced;
    if (!is_zero_vec(lambda)) c *= padic_character(dot(lambda, t.coset.center), p_);
    if (c.is_zero()) continue;
    bool merged = false;
    for (auto& o : out.terms_) {
      if (o.coset == t.coset && o.twist == reduced) {
        o.coeff += c;
        merged = true;
        break;
      }
    }
    if (!merged) out.terms_.push_back({c, reduced, t.coset});
  }
  out.terms_.erase(std::remove_if(out.terms_.begin(), out.terms_.end(), [](const SBTerm& t) { return t.coeff.is_zero(); }),
                   out.terms_.end());
  return out;
}

long SBFunction::constancy_exponent() const {
  if (terms_.empty()) return 0;
  long j = std::numeric_limits<long>::min();
  for (const auto& t : terms_) {
    j = std::max(j, t.coset.lattice.inner_ball_exponent());
    const long vu = vec_min_valuation(t.twist, p_);
    if (vu != kInfiniteValuation) j = std::max(j, -vu);
  }
  return j;
}

long SBFunction::support_exponent() const {
  if (terms_.empty()) return 0;
  long j = std::numeric_limits<long>::max();
  for (const auto& t : terms_) {
    j = std::min(j, t.coset.lattice.outer_ball_exponent());
    const long vc = vec_min_valuation(t.coset.center, p_);
    if (vc != kInfiniteValuation) j = std::min(j, vc);
  }
  return j;
}

SBFunction& SBFunction::operator+=(const SBFunction& g) {
  check_compatible(g);
  if (g.terms_.empty()) return *this;
  if (terms_.empty()) {
    terms_ = g.terms_;
    scale_ = g.scale_;
    return *this;
  }
  if (g.scale_ != scale_) throw std::domain_error("sum of SB functions with incommensurable p-power scales");
  for (const auto& t : g.terms_) terms_.push_back(t);
  *this = simplified();
  return *this;
}

SBFunction operator*(const SBFunction& f, const SBFunction& g) {
  f.check_compatible(g);
  SBFunction out(f.p_, f.shape_);
  for (const auto& a : f.terms_) {
    for (const auto& b : g.terms_) {
      const auto c = intersect(a.coset, b.coset);
      if (!c) continue;
      out.terms_.push_back({a.coeff * b.coeff, a.twist + b.twist, *c});
    }
  }
  out.set_scale(f.scale_ + g.scale_);
  return out.simplified();
}

}  // namespace ups
