#pragma once

// JSON encodings. Rationals are strings, complex numbers {"re","im"},
// cyclotomic values {"conductor", "coeffs"} in the power basis. Matrix
// entries are row-major; complex entries may be [re, im] pairs.

#include "ups/function_class.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace ups::verify {

using nlohmann::json;

/// Malformed configuration or input; carries every problem found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

json to_json(const Rational& x);
json to_json(const Complex& z);
json to_json(const CyclotomicValue& v);
json to_json(const ScaledCyclotomic& v);
json to_json(const MatR& m);
json to_json(const MatC& m);
json to_json(const MatQ& m);
json to_json(const GaussianForm& g);
json to_json(const SBFunction& f);

Rational rational_from_json(const json& j);
Complex complex_from_json(const json& j);
CyclotomicValue cyclotomic_from_json(const json& j, long p);

template <class S>
Mat<S> matrix_from_json(const json& j);

/// Parses {"type": "gaussian"|"standard"|"sb"|"ball"|"coset"|"product", ...}
/// into a function of the given shape.
template <class S>
fn_t<S> function_from_json(const json& j, const FieldDescriptor& fd, Shape shape);

/// "r", "c", "qp" with a prime; also accepts the display names R, C, Q<p>.
FieldDescriptor parse_field(const std::string& name, long p);

}  // namespace ups::verify
