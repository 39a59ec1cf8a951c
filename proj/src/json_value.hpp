// Exact JSON instance model: numbers are arbitrary-precision rationals,
// object member names are pairwise distinct, equality is structural.
#ifndef JSALG_JSON_VALUE_HPP
#define JSALG_JSON_VALUE_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace jsalg {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class JsonType { Null, Bool, Num, Str, Arr, Obj };

const char* json_type_name(JsonType t);

class JsonValue;
using JsonPtr = std::shared_ptr<const JsonValue>;

class JsonValue {
 public:
  using Array = std::vector<JsonPtr>;
  // Members are kept sorted by key; keys are unique.
  using Members = std::vector<std::pair<std::string, JsonPtr>>;

  static JsonPtr make_null();
  static JsonPtr make_bool(bool b);
  static JsonPtr make_num(Rational q);
  static JsonPtr make_str(std::string s);
  static JsonPtr make_arr(Array items);
  // Throws std::invalid_argument on duplicate keys.
  static JsonPtr make_obj(Members members);

  JsonType type() const;

  bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_num() const { return std::holds_alternative<Rational>(v_); }
  bool is_str() const { return std::holds_alternative<std::string>(v_); }
  bool is_arr() const { return std::holds_alternative<Array>(v_); }
  bool is_obj() const { return std::holds_alternative<Members>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  const Rational& as_num() const { return std::get<Rational>(v_); }
  const std::string& as_str() const { return std::get<std::string>(v_); }
  const Array& as_arr() const { return std::get<Array>(v_); }
  const Members& as_obj() const { return std::get<Members>(v_); }

  // nullptr when absent.
  JsonPtr get(const std::string& key) const;

  explicit JsonValue(std::variant<std::monostate, bool, Rational, std::string,
                                  Array, Members>
                         v)
      : v_(std::move(v)) {}

 private:
  std::variant<std::monostate, bool, Rational, std::string, Array, Members> v_;
};

JsonType type_of(const JsonValue& v);
bool deep_equal(const JsonValue& a, const JsonValue& b);
inline bool deep_equal(const JsonPtr& a, const JsonPtr& b) {
  return deep_equal(*a, *b);
}

struct JsonParseError : std::runtime_error {
  enum class Kind { Syntax, DuplicateKey };
  Kind kind;
  JsonParseError(Kind k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
};

// Parses UTF-8 JSON text; numbers become exact rationals; duplicate object
// keys raise JsonParseError{DuplicateKey}.
JsonPtr parse_json(const std::string& text);

// Canonical serialization: object keys sorted, numbers in shortest exact
// decimal form, no insignificant whitespace.
std::string serialize(const JsonValue& v);
inline std::string serialize(const JsonPtr& v) { return serialize(*v); }

// Decimal literal (optional sign/fraction/exponent) to exact rational.
Rational rational_from_decimal(const std::string& text);
// Shortest exact decimal form; falls back to "p/q" if the denominator has a
// prime factor other than 2 or 5 (cannot happen for values parsed from JSON).
std::string rational_to_decimal(const Rational& q);

// JSON string escaping for serializers.
void append_json_string(std::string& out, const std::string& s);

}  // namespace jsalg

#endif  // JSALG_JSON_VALUE_HPP
