#include "ups/verify/json_io.hpp"

#include <sstream>

namespace ups::verify {

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "; " : "") << xs[i];
  return os.str();
}

[[noreturn]] void fail(const std::string& what) { throw ConfigError({what}); }

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing key '") + key + "'");
  return j.at(key);
}

template <class S>
json entry(const S& x) {
  if constexpr (std::is_same_v<S, Complex>) {
    return json::array({x.real(), x.imag()});
  } else if constexpr (std::is_same_v<S, Rational>) {
    return to_string(x);
  } else {
    return json(x);
  }
}

template <class S>
json matrix_json(const Mat<S>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(entry(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class S>
S scalar_from_json(const json& j) {
  if constexpr (std::is_same_v<S, Rational>) {
    return rational_from_json(j);
  } else if constexpr (std::is_same_v<S, Complex>) {
    return complex_from_json(j);
  } else {
    if (!j.is_number()) fail("expected a real number, got " + j.dump());
    return j.get<double>();
  }
}

template <class S>
Vec<S> vector_from_json(const json& j) {
  if (!j.is_array()) fail("expected an array, got " + j.dump());
  Vec<S> v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = scalar_from_json<S>(j[i]);
  return v;
}

VecC ell_from_json(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) fail("'ell' must have " + std::to_string(d) + " entries");
  VecC v(d);
  for (int i = 0; i < d; ++i) v(i) = complex_from_json(j[static_cast<std::size_t>(i)]);
  return v;
}

GaussianForm gaussian_from_json(const json& j, const FieldDescriptor& fd, Shape shape) {
  const std::string type = member(j, "type").get<std::string>();
  const int d = shape.entries() * fd.coordinates_per_scalar();
  if (type == "standard") return GaussianForm::standard(fd, shape);
  if (type == "product") {
    const json& of = member(j, "of");
    if (!of.is_array() || of.empty()) fail("'of' must be a nonempty array");
    GaussianForm g = gaussian_from_json(of[0], fd, shape);
    for (std::size_t i = 1; i < of.size(); ++i) g = g * gaussian_from_json(of[i], fd, shape);
    return g;
  }
  if (type != "gaussian") fail("function type '" + type + "' is not available over " + fd.name());
  const MatR Q = matrix_from_json<double>(member(j, "Q"));
  if (Q.rows() != d || Q.cols() != d) fail("'Q' must be " + std::to_string(d) + " x " + std::to_string(d));
  const Complex kappa = j.contains("kappa") ? complex_from_json(j["kappa"]) : Complex(1, 0);
  const VecC ell = j.contains("ell") ? ell_from_json(j["ell"], d) : VecC(VecC::Zero(d));
  try {
    return GaussianForm(kappa, Q, ell, fd, shape);
  } catch (const std::exception& e) {
    fail(std::string("invalid gaussian: ") + e.what());
  }
}

SBFunction sb_from_json(const json& j, long p, Shape shape) {
  const std::string type = member(j, "type").get<std::string>();
  const int d = shape.entries();
  if (type == "ball") return SBFunction::ball(p, shape, j.value("k", 0L));
  if (type == "coset") {
    const VecQ c = vector_from_json<Rational>(member(j, "center"));
    if (c.size() != d) fail("'center' must have " + std::to_string(d) + " entries");
    return SBFunction::indicator(Coset(c, Lattice::standard(d, p, j.value("k", 0L))), shape);
  }
  if (type == "product") {
    const json& of = member(j, "of");
    if (!of.is_array() || of.empty()) fail("'of' must be a nonempty array");
    SBFunction f = sb_from_json(of[0], p, shape);
    for (std::size_t i = 1; i < of.size(); ++i) f = f * sb_from_json(of[i], p, shape);
    return f;
  }
  if (type != "sb") fail("function type '" + type + "' is not available over Q" + std::to_string(p));
  SBFunction f(p, shape);
  for (const json& t : member(j, "terms")) {
    const CyclotomicValue coeff = t.contains("coeff") ? cyclotomic_from_json(t["coeff"], p) : CyclotomicValue::rational(p, 1);
    const VecQ center = t.contains("center") ? vector_from_json<Rational>(t["center"]) : VecQ(VecQ::Zero(d));
    const VecQ twist = t.contains("twist") ? vector_from_json<Rational>(t["twist"]) : VecQ(VecQ::Zero(d));
    const MatQ basis = t.contains("basis") ? matrix_from_json<Rational>(t["basis"]) : MatQ(MatQ::Identity(d, d));
    if (center.size() != d || twist.size() != d || basis.rows() != d || basis.cols() != d) {
      fail("sb term dimensions must match " + std::to_string(d) + " coordinates");
    }
    try {
      f.add_term(coeff, twist, Coset(center, Lattice::from_generators(basis, p)));
    } catch (const std::exception& e) {
      fail(std::string("invalid sb term: ") + e.what());
    }
  }
  return f;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

json to_json(const Rational& x) { return to_string(x); }
json to_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const CyclotomicValue& v) {
  json coeffs = json::array();
  for (const Rational& c : v.coeffs()) coeffs.push_back(to_string(c));
  return {{"conductor", v.conductor().str()}, {"coeffs", coeffs}};
}

json to_json(const ScaledCyclotomic& v) {
  json j = to_json(v.value());
  j["p"] = v.prime();
  j["p_exponent"] = to_string(v.exponent());
  j["text"] = to_string(v);
  return j;
}

json to_json(const MatR& m) { return matrix_json(m); }
json to_json(const MatC& m) { return matrix_json(m); }
json to_json(const MatQ& m) { return matrix_json(m); }

json to_json(const GaussianForm& g) {
  json ell = json::array();
  for (Eigen::Index i = 0; i < g.ell().size(); ++i) ell.push_back(to_json(g.ell()(i)));
  return {{"type", "gaussian"},
          {"field", g.field().name()},
          {"shape", {g.shape().rows, g.shape().cols}},
          {"kappa", to_json(g.kappa())},
          {"Q", to_json(g.Q())},
          {"ell", ell}};
}

json to_json(const SBFunction& f) {
  json terms = json::array();
  for (const SBTerm& t : f.terms()) {
    json c = json::array(), tw = json::array();
    for (Eigen::Index i = 0; i < t.coset.center.size(); ++i) c.push_back(to_string(t.coset.center(i)));
    for (Eigen::Index i = 0; i < t.twist.size(); ++i) tw.push_back(to_string(t.twist(i)));
    terms.push_back({{"coeff", to_json(t.coeff)}, {"center", c}, {"twist", tw}, {"basis", to_json(t.coset.lattice.basis())}});
  }
  return {{"type", "sb"},
          {"p", f.prime()},
          {"shape", {f.shape().rows, f.shape().cols}},
          {"scale_exponent", to_string(f.scale_exponent())},
          {"terms", terms}};
}

Rational rational_from_json(const json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::exception& e) {
    fail("bad rational " + j.dump() + ": " + e.what());
  }
  fail("expected a rational string, got " + j.dump());
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("re")) return {j["re"].get<double>(), j.value("im", 0.0)};
  fail("expected a complex number, got " + j.dump());
}

CyclotomicValue cyclotomic_from_json(const json& j, long p) {
  if (!j.is_object()) return CyclotomicValue::rational(p, rational_from_json(j));
  const BigInt N(member(j, "conductor").is_string() ? j["conductor"].get<std::string>() : std::to_string(j["conductor"].get<long>()));
  long M = 0;
  BigInt q = 1;
  while (q < N) {
    q *= p;
    ++M;
  }
  if (q != N) fail("conductor " + N.str() + " is not a power of " + std::to_string(p));
  const json& coeffs = member(j, "coeffs");
  CyclotomicValue v(p);
  for (std::size_t r = 0; r < coeffs.size(); ++r) {
    v += CyclotomicValue::root_of_unity(p, M, BigInt(static_cast<long>(r))) * rational_from_json(coeffs[r]);
  }
  return v;
}

template <class S>
Mat<S> matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) fail("expected a row-major matrix, got " + j.dump());
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat<S> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) fail("ragged matrix " + j.dump());
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = scalar_from_json<S>(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

template MatR matrix_from_json<double>(const json&);
template MatC matrix_from_json<Complex>(const json&);
template MatQ matrix_from_json<Rational>(const json&);

template <class S>
fn_t<S> function_from_json(const json& j, const FieldDescriptor& fd, Shape shape) {
  if (!j.is_object()) fail("function spec must be an object");
  if constexpr (std::is_same_v<S, Rational>) {
    return sb_from_json(j, fd.prime(), shape);
  } else {
    return gaussian_from_json(j, fd, shape);
  }
}

template GaussianForm function_from_json<double>(const json&, const FieldDescriptor&, Shape);
template GaussianForm function_from_json<Complex>(const json&, const FieldDescriptor&, Shape);
template SBFunction function_from_json<Rational>(const json&, const FieldDescriptor&, Shape);

FieldDescriptor parse_field(const std::string& name, long p) {
  if (name == "r" || name == "R") return FieldDescriptor::real();
  if (name == "c" || name == "C") return FieldDescriptor::complex();
  long prime = p;
  if (name.size() > 1 && name[0] == 'Q') prime = std::stol(name.substr(1));
  else if (name != "qp") fail("unknown field '" + name + "' (expected r, c or qp)");
  try {
    return FieldDescriptor::padic(prime);
  } catch (const std::exception& e) {
    fail(std::string("bad prime: ") + e.what());
  }
}

}  // namespace ups::verify
