#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json_value.hpp"

#include <random>

using namespace jsalg;

TEST_CASE("parse and type classification") {
  CHECK(parse_json("null")->is_null());
  CHECK(parse_json("true")->as_bool());
  CHECK_FALSE(parse_json("false")->as_bool());
  CHECK(parse_json("1")->is_num());
  CHECK(parse_json("\"x\"")->is_str());
  CHECK(parse_json("[1,2]")->is_arr());
  CHECK(parse_json("{}")->is_obj());
  CHECK(json_type_name(parse_json("3.5")->type()) == std::string("Num"));
}

TEST_CASE("numbers are exact rationals") {
  auto a = parse_json("0.1");
  CHECK(a->as_num() == Rational(1, 10));
  auto b = parse_json("1e3");
  CHECK(b->as_num() == Rational(1000));
  auto c = parse_json("-2.5e-1");
  CHECK(c->as_num() == Rational(-1, 4));
  // 0.1 + 0.2 == 0.3 exactly, unlike binary floating point
  CHECK(parse_json("0.1")->as_num() + parse_json("0.2")->as_num() ==
        parse_json("0.3")->as_num());
}

TEST_CASE("numeric equality ignores notation") {
  CHECK(deep_equal(parse_json("1"), parse_json("1.0")));
  CHECK(deep_equal(parse_json("1e2"), parse_json("100")));
  CHECK_FALSE(deep_equal(parse_json("1"), parse_json("true")));
  CHECK_FALSE(deep_equal(parse_json("1"), parse_json("\"1\"")));
}

TEST_CASE("duplicate object keys are a parse error") {
  CHECK_THROWS_AS(parse_json("{\"a\":1,\"a\":2}"), JsonParseError);
  try {
    parse_json("{\"a\":1,\"a\":2}");
  } catch (const JsonParseError& e) {
    CHECK(e.kind == JsonParseError::Kind::DuplicateKey);
  }
  CHECK_THROWS_AS(parse_json("{\"a\":1,"), JsonParseError);
  CHECK_THROWS_AS(parse_json("01"), JsonParseError);
  CHECK_THROWS_AS(parse_json(""), JsonParseError);
}

TEST_CASE("serialization is canonical") {
  CHECK(serialize(parse_json(" { \"b\" : 1 , \"a\" : [ 1.50 ] } ")) ==
        "{\"a\":[1.5],\"b\":1}");
  CHECK(serialize(parse_json("1.0")) == "1");
  CHECK(serialize(parse_json("1e2")) == "100");
  CHECK(serialize(parse_json("\"a\\nb\"")) == "\"a\\nb\"");
}

TEST_CASE("round-trip idempotence") {
  const char* inputs[] = {
      "null", "true", "[1,2.5,\"x\"]", "{\"z\":null,\"a\":{\"b\":[]}}",
      "-0.125", "\"\\u00e9\"", "[[[[1]]]]",
  };
  for (const char* in : inputs) {
    auto once = serialize(parse_json(in));
    auto twice = serialize(parse_json(once));
    CHECK(once == twice);
    CHECK(deep_equal(parse_json(in), parse_json(once)));
  }
}

static JsonPtr random_value(std::mt19937_64& rng, int depth) {
  switch (rng() % (depth > 0 ? 6 : 4)) {
    case 0: return JsonValue::make_null();
    case 1: return JsonValue::make_bool(rng() % 2 == 0);
    case 2:
      return JsonValue::make_num(
          Rational(int64_t(rng() % 1000) - 500, int64_t(rng() % 9) + 1));
    case 3: return JsonValue::make_str(std::string(rng() % 4, 'a' + rng() % 3));
    case 4: {
      JsonValue::Array a;
      for (size_t i = rng() % 3; i-- > 0;)
        a.push_back(random_value(rng, depth - 1));
      return JsonValue::make_arr(std::move(a));
    }
    default: {
      JsonValue::Members m;
      for (size_t i = rng() % 3; i-- > 0;)
        m.emplace_back(std::string(1, char('a' + i)), random_value(rng, depth - 1));
      return JsonValue::make_obj(std::move(m));
    }
  }
}

TEST_CASE("deep_equal is an equivalence relation on samples") {
  std::mt19937_64 rng(42);
  std::vector<JsonPtr> vs;
  for (int i = 0; i < 60; ++i) vs.push_back(random_value(rng, 2));
  for (const auto& a : vs) CHECK(deep_equal(a, a));
  for (const auto& a : vs)
    for (const auto& b : vs) CHECK(deep_equal(a, b) == deep_equal(b, a));
  for (const auto& a : vs)
    for (const auto& b : vs)
      for (const auto& c : vs)
        if (deep_equal(a, b) && deep_equal(b, c)) CHECK(deep_equal(a, c));
}

TEST_CASE("every value has exactly one type") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    auto v = random_value(rng, 2);
    int flags = int(v->is_null()) + int(v->is_bool()) + int(v->is_num()) +
                int(v->is_str()) + int(v->is_arr()) + int(v->is_obj());
    CHECK(flags == 1);
  }
}

TEST_CASE("object member lookup") {
  auto o = parse_json("{\"a\":1,\"b\":null}");
  REQUIRE(o->get("a"));
  CHECK(o->get("a")->as_num() == 1);
  CHECK(o->get("b")->is_null());
  CHECK(o->get("c") == nullptr);
}

TEST_CASE("rational decimal conversions") {
  CHECK(rational_from_decimal("2.50") == Rational(5, 2));
  CHECK(rational_to_decimal(Rational(5, 2)) == "2.5");
  CHECK(rational_to_decimal(Rational(-3)) == "-3");
  CHECK(rational_to_decimal(Rational(1, 3)) == "1/3");  // non-decimal fallback
}
