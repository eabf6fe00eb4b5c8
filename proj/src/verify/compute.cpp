#include "ups/intertwine.hpp"
#include "ups/verify/suite.hpp"

namespace ups::verify {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError({what}); }

const json& points_of(const json& spec) {
  if (!spec.contains("points") || !spec["points"].is_array() || spec["points"].empty()) {
    fail("'points' must be a nonempty array of matrices");
  }
  return spec["points"];
}

template <class S>
Mat<S> checked_point(const json& j, int rows, int cols) {
  const Mat<S> m = matrix_from_json<S>(j);
  if (m.rows() != rows || m.cols() != cols) fail("point " + j.dump() + " must be " + std::to_string(rows) + " x " + std::to_string(cols));
  return m;
}

template <class S>
json value_json(const val_t<S>& v) {
  return to_json(v);
}

template <class S>
json compute_typed(const std::string& op, const json& spec, const FieldDescriptor& fd, int n) {
  if (!spec.contains("function")) fail("missing key 'function'");
  json out = {{"op", op}, {"field", fd.name()}, {"n", n}};
  json values = json::array();
  if (op == "fourier") {
    const fn_t<S> f = function_from_json<S>(spec["function"], fd, x_shape(n));
    const fn_t<S> F = fourier<S>(f);
    out["transform"] = to_json(F);
    for (const json& p : points_of(spec)) {
      const Mat<S> y = checked_point<S>(p, n, n + 1);
      values.push_back({{"y", to_json(y)}, {"value", value_json<S>(F.evaluate(y))}});
    }
  } else if (op == "intertwine") {
    const fn_t<S> f = function_from_json<S>(spec["function"], fd, x_shape(n));
    for (const json& p : points_of(spec)) {
      const Mat<S> y = checked_point<S>(p, n, n + 1);
      if (!is_regular<S>(y)) fail("point " + p.dump() + " is not of full rank");
      values.push_back({{"y", to_json(y)}, {"value", value_json<S>(intertwine_I<S>(f, y))}});
    }
  } else if (op == "inner-product") {
    const std::string side = spec.value("side", std::string("X"));
    if (side != "X" && side != "Xbar") fail("'side' must be \"X\" or \"Xbar\"");
    const Shape sh = side == "X" ? x_shape(n) : xbar_shape(n);
    const fn_t<S> f = function_from_json<S>(spec["function"], fd, sh);
    const fn_t<S> h = spec.contains("second") ? function_from_json<S>(spec["second"], fd, sh) : f;
    out["side"] = side;
    for (const json& p : points_of(spec)) {
      const Mat<S> a = checked_point<S>(p, n, n);
      if (!is_regular<S>(a)) fail("point " + p.dump() + " is singular");
      const val_t<S> v = side == "X" ? inner_X_at<S>(f, h, a) : inner_Xbar_at<S>(f, h, a);
      values.push_back({{"a", to_json(a)}, {"value", value_json<S>(v)}});
    }
  } else {
    fail("unknown operation '" + op + "' (expected fourier, intertwine or inner-product)");
  }
  out["values"] = values;
  return out;
}

}  // namespace

json compute(const std::string& op, const json& spec) {
  if (!spec.is_object()) fail("input must be a JSON object");
  if (!spec.contains("field") || !spec["field"].is_string()) fail("missing string key 'field'");
  const FieldDescriptor fd = parse_field(spec["field"].get<std::string>(), spec.value("p", 2L));
  const int n = spec.value("n", 1);
  if (n < 1) fail("'n' must be positive");
  try {
    switch (fd.kind()) {
      case FieldKind::real: return compute_typed<double>(op, spec, fd, n);
      case FieldKind::complex: return compute_typed<Complex>(op, spec, fd, n);
      case FieldKind::padic: return compute_typed<Rational>(op, spec, fd, n);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("malformed input: ") + e.what());
  }
  return {};
}

}  // namespace ups::verify
