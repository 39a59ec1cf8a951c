#include "json_value.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>

namespace jsalg {

const char* json_type_name(JsonType t) {
  switch (t) {
    case JsonType::Null: return "Null";
    case JsonType::Bool: return "Bool";
    case JsonType::Num: return "Num";
    case JsonType::Str: return "Str";
    case JsonType::Arr: return "Arr";
    case JsonType::Obj: return "Obj";
  }
  return "?";
}

JsonPtr JsonValue::make_null() {
  static const JsonPtr v = std::make_shared<JsonValue>(std::monostate{});
  return v;
}
JsonPtr JsonValue::make_bool(bool b) {
  return std::make_shared<JsonValue>(b);
}
JsonPtr JsonValue::make_num(Rational q) {
  return std::make_shared<JsonValue>(std::move(q));
}
JsonPtr JsonValue::make_str(std::string s) {
  return std::make_shared<JsonValue>(std::move(s));
}
JsonPtr JsonValue::make_arr(Array items) {
  return std::make_shared<JsonValue>(std::move(items));
}
JsonPtr JsonValue::make_obj(Members members) {
  std::sort(members.begin(), members.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < members.size(); ++i) {
    if (members[i - 1].first == members[i].first) {
      throw std::invalid_argument("duplicate object key: " + members[i].first);
    }
  }
  return std::make_shared<JsonValue>(std::move(members));
}

JsonType JsonValue::type() const {
  switch (v_.index()) {
    case 0: return JsonType::Null;
    case 1: return JsonType::Bool;
    case 2: return JsonType::Num;
    case 3: return JsonType::Str;
    case 4: return JsonType::Arr;
    default: return JsonType::Obj;
  }
}

JsonPtr JsonValue::get(const std::string& key) const {
  const Members& ms = as_obj();
  auto it = std::lower_bound(
      ms.begin(), ms.end(), key,
      [](const auto& m, const std::string& k) { return m.first < k; });
  if (it != ms.end() && it->first == key) return it->second;
  return nullptr;
}

JsonType type_of(const JsonValue& v) { return v.type(); }

bool deep_equal(const JsonValue& a, const JsonValue& b) {
  if (a.type() != b.type()) return false;
  switch (a.type()) {
    case JsonType::Null: return true;
    case JsonType::Bool: return a.as_bool() == b.as_bool();
    case JsonType::Num: return a.as_num() == b.as_num();
    case JsonType::Str: return a.as_str() == b.as_str();
    case JsonType::Arr: {
      const auto& xs = a.as_arr();
      const auto& ys = b.as_arr();
      if (xs.size() != ys.size()) return false;
      for (size_t i = 0; i < xs.size(); ++i) {
        if (!deep_equal(*xs[i], *ys[i])) return false;
      }
      return true;
    }
    case JsonType::Obj: {
      const auto& xs = a.as_obj();
      const auto& ys = b.as_obj();
      if (xs.size() != ys.size()) return false;
      // Both member lists are sorted by key.
      for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].first != ys[i].first) return false;
        if (!deep_equal(*xs[i].second, *ys[i].second)) return false;
      }
      return true;
    }
  }
  return false;
}

Rational rational_from_decimal(const std::string& text) {
  size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    neg = text[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  long frac_len = 0;
  bool any = false;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
    digits = digits * 10 + (text[i] - '0');
    any = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      digits = digits * 10 + (text[i] - '0');
      ++frac_len;
      any = true;
    }
  }
  long exp = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      eneg = text[i] == '-';
      ++i;
    }
    bool eany = false;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      exp = exp * 10 + (text[i] - '0');
      eany = true;
      if (exp > 1000000) throw std::invalid_argument("exponent too large");
    }
    if (!eany) throw std::invalid_argument("bad exponent: " + text);
    if (eneg) exp = -exp;
  }
  if (!any || i != text.size()) {
    throw std::invalid_argument("bad decimal literal: " + text);
  }
  exp -= frac_len;
  Rational q(digits);
  if (exp > 0) {
    q *= Rational(boost::multiprecision::pow(BigInt(10), unsigned(exp)));
  } else if (exp < 0) {
    q /= Rational(boost::multiprecision::pow(BigInt(10), unsigned(-exp)));
  }
  if (neg) q = -q;
  return q;
}

std::string rational_to_decimal(const Rational& q) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  // Strip factors of 2 and 5 from the denominator.
  long twos = 0, fives = 0;
  BigInt rest = den;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1) {
    // Not a finite decimal; emit an exact fraction.
    return num.str() + "/" + den.str();
  }
  long m = std::max(twos, fives);
  BigInt scaled = num * boost::multiprecision::pow(BigInt(2), unsigned(m - twos)) *
                  boost::multiprecision::pow(BigInt(5), unsigned(m - fives));
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string s = scaled.str();
  std::string out;
  if (m == 0) {
    out = s;
  } else {
    if (long(s.size()) <= m) s.insert(0, size_t(m + 1 - long(s.size())), '0');
    std::string ip = s.substr(0, s.size() - size_t(m));
    std::string fp = s.substr(s.size() - size_t(m));
    while (!fp.empty() && fp.back() == '0') fp.pop_back();
    out = fp.empty() ? ip : ip + "." + fp;
  }
  return neg ? "-" + out : out;
}

void append_json_string(std::string& out, const std::string& s) {
  out.push_back('"');
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(char(c));
        }
    }
  }
  out.push_back('"');
}

namespace {

// SAX handler that builds JsonValue trees with exact numbers and rejects
// duplicate object keys.
struct Builder {
  struct Frame {
    bool is_obj;
    JsonValue::Array arr;
    JsonValue::Members members;
    std::string pending_key;
  };
  std::vector<Frame> stack;
  JsonPtr result;

  bool add(JsonPtr v) {
    if (stack.empty()) {
      result = std::move(v);
      return true;
    }
    Frame& f = stack.back();
    if (f.is_obj) {
      f.members.emplace_back(std::move(f.pending_key), std::move(v));
    } else {
      f.arr.push_back(std::move(v));
    }
    return true;
  }

  bool null() { return add(JsonValue::make_null()); }
  bool boolean(bool b) { return add(JsonValue::make_bool(b)); }
  bool number_integer(std::int64_t n) {
    return add(JsonValue::make_num(Rational(BigInt(n))));
  }
  bool number_unsigned(std::uint64_t n) {
    return add(JsonValue::make_num(Rational(BigInt(n))));
  }
  bool number_float(double, const std::string& raw) {
    return add(JsonValue::make_num(rational_from_decimal(raw)));
  }
  bool string(std::string& s) { return add(JsonValue::make_str(s)); }
  bool binary(nlohmann::json::binary_t&) { return false; }
  bool start_object(std::size_t) {
    stack.push_back(Frame{true, {}, {}, {}});
    return true;
  }
  bool key(std::string& k) {
    stack.back().pending_key = k;
    return true;
  }
  bool end_object() {
    Frame f = std::move(stack.back());
    stack.pop_back();
    try {
      return add(JsonValue::make_obj(std::move(f.members)));
    } catch (const std::invalid_argument& e) {
      throw JsonParseError(JsonParseError::Kind::DuplicateKey, e.what());
    }
  }
  bool start_array(std::size_t) {
    stack.push_back(Frame{false, {}, {}, {}});
    return true;
  }
  bool end_array() {
    Frame f = std::move(stack.back());
    stack.pop_back();
    return add(JsonValue::make_arr(std::move(f.arr)));
  }
  bool parse_error(std::size_t pos, const std::string&,
                   const nlohmann::json::exception& ex) {
    throw JsonParseError(JsonParseError::Kind::Syntax,
                         "JSON syntax error at byte " + std::to_string(pos) +
                             ": " + ex.what());
  }
};

void serialize_into(std::string& out, const JsonValue& v) {
  switch (v.type()) {
    case JsonType::Null: out += "null"; break;
    case JsonType::Bool: out += v.as_bool() ? "true" : "false"; break;
    case JsonType::Num: out += rational_to_decimal(v.as_num()); break;
    case JsonType::Str: append_json_string(out, v.as_str()); break;
    case JsonType::Arr: {
      out.push_back('[');
      bool first = true;
      for (const auto& x : v.as_arr()) {
        if (!first) out.push_back(',');
        first = false;
        serialize_into(out, *x);
      }
      out.push_back(']');
      break;
    }
    case JsonType::Obj: {
      out.push_back('{');
      bool first = true;
      for (const auto& [k, x] : v.as_obj()) {
        if (!first) out.push_back(',');
        first = false;
        append_json_string(out, k);
        out.push_back(':');
        serialize_into(out, *x);
      }
      out.push_back('}');
      break;
    }
  }
}

}  // namespace

JsonPtr parse_json(const std::string& text) {
  Builder b;
  nlohmann::json::sax_parse(text, &b);
  if (!b.result) {
    throw JsonParseError(JsonParseError::Kind::Syntax, "empty input");
  }
  return b.result;
}

std::string serialize(const JsonValue& v) {
  std::string out;
  serialize_into(out, v);
  return out;
}

}  // namespace jsalg
