#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "algebra.hpp"
#include "generator.hpp"
#include "notelim.hpp"
#include "semantics.hpp"
#include "translate.hpp"

using namespace jsalg;

static Document translate(const std::string& text,
                          DraftDialect dialect = DraftDialect::Draft06) {
  return from_json_schema(normalize_refs(parse_json(text)), dialect).doc;
}

static bool sample_equiv(const Document& a, const Document& b, int n = 300) {
  InstanceGenerator gen(0);
  gen.add_hints(a);
  gen.add_hints(b);
  return equiv_sample(a, b, gen, n).indistinguishable;
}

TEST_CASE("normalize_refs copies non-normal targets under definitions") {
  auto in = parse_json(
      "{\"properties\":{\"Country\":{\"type\":\"string\"},"
      "\"City\":{\"$ref\":\"#/properties/Country\"}}}");
  auto out = normalize_refs(in);
  auto defs = out->get("definitions");
  REQUIRE(defs);
  REQUIRE(defs->get("properties_Country"));
  CHECK(defs->get("properties_Country")->get("type")->as_str() == "string");
  auto city = out->get("properties")->get("City");
  CHECK(city->get("$ref")->as_str() == "#/definitions/properties_Country");
  // idempotent
  CHECK(deep_equal(normalize_refs(out), out));
}

TEST_CASE("normalize_refs leaves normal refs alone") {
  auto root = parse_json("{\"$ref\":\"#\"}");
  CHECK(deep_equal(normalize_refs(root), root));
  auto norm = parse_json(
      "{\"definitions\":{\"a\":{\"type\":\"null\"}},\"$ref\":\"#/definitions/a\"}");
  CHECK(deep_equal(normalize_refs(norm), norm));
  auto plain = parse_json("{\"minimum\":3}");
  CHECK(deep_equal(normalize_refs(plain), plain));
}

TEST_CASE("normalize_refs rejects dangling and external refs") {
  CHECK_THROWS_AS(normalize_refs(parse_json("{\"$ref\":\"#/definitions/nope\"}")),
                  UnresolvedRefError);
  CHECK_THROWS_AS(normalize_refs(parse_json(
                      "{\"$ref\":\"http://example.com/s.json\"}")),
                  UnresolvedRefError);
}

TEST_CASE("keyword table: numbers") {
  auto d = translate("{\"minimum\":1}");
  CHECK(to_text(d.root) == "betw(1, inf)");
  CHECK(to_text(translate("{\"maximum\":2.5}").root) == "betw(-inf, 2.5)");
  auto x = translate("{\"exclusiveMinimum\":0}");
  CHECK(to_text(x.root) == "xBetw(0, inf)");
  CHECK(to_text(translate("{\"multipleOf\":0.5}").root) == "mulOf(0.5)");
  // "integer" is Num ∧ mulOf(1)
  auto i = translate("{\"type\":\"integer\"}");
  CHECK(valid(parse_json("3"), i));
  CHECK(valid(parse_json("3.0"), i));
  CHECK_FALSE(valid(parse_json("3.5"), i));
  CHECK_FALSE(valid(parse_json("\"3\""), i));
}

TEST_CASE("draft-04 boolean exclusive bounds are rejected with a diagnostic") {
  try {
    translate("{\"minimum\":1,\"exclusiveMinimum\":true}");
    FAIL("expected InvalidSchemaError");
  } catch (const InvalidSchemaError& e) {
    CHECK(std::string(e.what()).find("raft-04") != std::string::npos);
  }
}

TEST_CASE("keyword table: strings, arrays, objects") {
  auto l = translate("{\"minLength\":2,\"maxLength\":4}");
  CHECK(valid(parse_json("\"ab\""), l));
  CHECK_FALSE(valid(parse_json("\"a\""), l));
  CHECK_FALSE(valid(parse_json("\"abcde\""), l));
  auto p = translate("{\"pattern\":\"^a\"}");
  CHECK(valid(parse_json("\"ab\""), p));
  CHECK_FALSE(valid(parse_json("\"ba\""), p));

  auto u = translate("{\"items\":{\"type\":\"integer\"}}");
  CHECK(valid(parse_json("[1,2]"), u));
  CHECK_FALSE(valid(parse_json("[1,\"x\"]"), u));
  CHECK(valid(parse_json("\"not an array\""), u));

  auto t = translate(
      "{\"items\":[{\"type\":\"integer\"},{\"type\":\"string\"}],"
      "\"additionalItems\":{\"type\":\"boolean\"}}");
  CHECK(valid(parse_json("[1,\"a\",true]"), t));
  CHECK_FALSE(valid(parse_json("[1,\"a\",1]"), t));
  CHECK_FALSE(valid(parse_json("[\"a\"]"), t));

  CHECK(to_text(translate("{\"uniqueItems\":true}").root) == "uniqueItems");
  CHECK(translate("{\"uniqueItems\":false}").root->op == Op::True);

  auto props = translate(
      "{\"properties\":{\"a\":{\"type\":\"integer\"}},"
      "\"patternProperties\":{\"^p\":{\"type\":\"string\"}},"
      "\"additionalProperties\":false}");
  REQUIRE(props.root->op == Op::Props);  // one grouped node
  CHECK(valid(parse_json("{\"a\":1,\"p1\":\"x\"}"), props));
  CHECK_FALSE(valid(parse_json("{\"z\":1}"), props));

  auto pn = translate("{\"propertyNames\":{\"maxLength\":1}}");
  CHECK(valid(parse_json("{\"a\":1}"), pn));
  CHECK_FALSE(valid(parse_json("{\"ab\":1}"), pn));
}

TEST_CASE("T-shirt schema translates to props and negated req") {
  auto txt = to_text(translate(
      "{\"type\":\"object\","
      "\"properties\":{"
      "\"color\":{\"enum\":[\"red\",\"blue\"]},"
      "\"size\":{\"enum\":[\"S\",\"M\",\"L\"]}},"
      "\"not\":{\"required\":[\"size\"]}}"));
  CHECK(txt.find("props") != std::string::npos);
  CHECK(txt.find("¬req(\"size\")") != std::string::npos);
}

TEST_CASE("contains and counting per dialect") {
  auto d6 = translate("{\"contains\":{\"type\":\"null\"}}");
  CHECK(valid(parse_json("[1,null]"), d6));
  CHECK_FALSE(valid(parse_json("[1]"), d6));

  auto r = from_json_schema(
      parse_json("{\"contains\":{\"type\":\"null\"},\"minContains\":2,"
                 "\"maxContains\":3}"),
      DraftDialect::Draft2019Subset);
  REQUIRE(r.doc.root->op == Op::Cnt);
  CHECK(r.doc.root->nlo == 2);
  CHECK(r.doc.root->nhi == 3);
  CHECK(valid(parse_json("[null,null]"), r.doc));
  CHECK_FALSE(valid(parse_json("[null]"), r.doc));

  // under Draft06 min/maxContains are unknown keywords: warned and ignored
  auto w = from_json_schema(
      parse_json("{\"contains\":{\"type\":\"null\"},\"minContains\":2}"),
      DraftDialect::Draft06);
  CHECK_FALSE(w.warnings.empty());
  CHECK(valid(parse_json("[null]"), w.doc));
}

TEST_CASE("dialect monotonicity on draft-06 files") {
  for (const char* s :
       {"{\"minimum\":1}", "{\"items\":[{\"type\":\"null\"}]}",
        "{\"properties\":{\"a\":{\"pattern\":\"x\"}},\"required\":[\"a\"]}"}) {
    auto a = translate(s, DraftDialect::Draft06);
    auto b = translate(s, DraftDialect::Draft2019Subset);
    CHECK(to_text(a) == to_text(b));
  }
}

TEST_CASE("dependencies disambiguated by entry shape") {
  auto arr = translate("{\"dependencies\":{\"a\":[\"b\"]}}");
  CHECK(valid(parse_json("{}"), arr));
  CHECK(valid(parse_json("{\"b\":1}"), arr));
  CHECK_FALSE(valid(parse_json("{\"a\":1}"), arr));
  CHECK(valid(parse_json("{\"a\":1,\"b\":2}"), arr));

  auto obj = translate("{\"dependencies\":{\"a\":{\"required\":[\"c\"]}}}");
  CHECK(valid(parse_json("{}"), obj));
  CHECK_FALSE(valid(parse_json("{\"a\":1}"), obj));
  CHECK(valid(parse_json("{\"a\":1,\"c\":2}"), obj));
}

TEST_CASE("definitions become the environment with a fresh root variable") {
  auto d = translate(
      "{\"definitions\":{\"pos\":{\"exclusiveMinimum\":0}},"
      "\"$ref\":\"#/definitions/pos\"}");
  CHECK(d.env.has("pos"));
  CHECK(valid(parse_json("1"), d));
  CHECK_FALSE(valid(parse_json("0"), d));

  // "#" refers to the root variable
  auto rec = translate(
      "{\"type\":\"object\","
      "\"properties\":{\"next\":{\"$ref\":\"#\"},"
      "\"value\":{\"type\":\"integer\"}},\"required\":[\"value\"]}");
  CHECK_FALSE(check_guarded(rec).has_value());
  CHECK(valid(parse_json("{\"value\":1,\"next\":{\"value\":2}}"), rec));
  CHECK_FALSE(valid(parse_json("{\"value\":1,\"next\":{}}"), rec));
}

TEST_CASE("$ref short-circuits sibling keywords with a warning") {
  auto r = from_json_schema(
      normalize_refs(parse_json(
          "{\"definitions\":{\"a\":{\"type\":\"null\"}},"
          "\"$ref\":\"#/definitions/a\",\"minimum\":5}")),
      DraftDialect::Draft06);
  CHECK_FALSE(r.warnings.empty());
  CHECK(valid(parse_json("null"), r.doc));
}

TEST_CASE("unknown keywords warn, annotations do not") {
  auto r = from_json_schema(parse_json("{\"frobnicate\":1}"),
                            DraftDialect::Draft06);
  CHECK(r.warnings.size() == 1);
  CHECK(r.doc.root->op == Op::True);
  auto a = from_json_schema(
      parse_json("{\"title\":\"x\",\"description\":\"y\",\"default\":3}"),
      DraftDialect::Draft06);
  CHECK(a.warnings.empty());
}

TEST_CASE("boolean schemas and infer_dialect") {
  CHECK(translate("true").root->op == Op::True);
  CHECK(translate("false").root->op == Op::False);
  CHECK(infer_dialect(parse_json("{}")) == DraftDialect::Draft06);
  CHECK(infer_dialect(parse_json(
            "{\"$schema\":\"https://json-schema.org/draft/2019-09/schema\"}")) ==
        DraftDialect::Draft2019Subset);
  CHECK(infer_dialect(parse_json(
            "{\"$schema\":\"http://json-schema.org/draft-06/schema#\"}")) ==
        DraftDialect::Draft06);
}

TEST_CASE("extended mode round-trips every dual operator") {
  std::vector<SchemaPtr> roots = {
      S::pattreq({{Pattern::parse("^x"), S::len(1, 2)}}),
      S::cont_after(2, S::type1(JsonType::Str)),
      S::not_mulof(Rational(3)),
      S::repeated_items(),
      S::cnt(2, 4, S::type1(JsonType::Num)),
  };
  for (const auto& r : roots) {
    Document d;
    d.root = r;
    auto emitted = to_json_schema(d, EmitMode::Extended);
    // extended output uses minContains/maxContains for cnt, so it is read
    // back under the 2019 subset dialect (the x- keywords are recognized
    // under every dialect)
    auto back = from_json_schema(normalize_refs(emitted.schema),
                                 DraftDialect::Draft2019Subset)
                    .doc;
    CHECK(sample_equiv(d, back));
  }
}

TEST_CASE("draft2019 mode uses standard keywords only") {
  Document d;
  d.root = S::cnt(2, kInf, S::type1(JsonType::Str));
  auto e = to_json_schema(d, EmitMode::Draft2019);
  CHECK(e.schema->get("contains"));
  REQUIRE(e.schema->get("minContains"));
  CHECK(e.schema->get("minContains")->as_num() == 2);
  CHECK(serialize(e.schema).find("x-") == std::string::npos);

  Document pr;
  pr.root = S::pattreq({{Pattern::parse("^x"), S::t()}});
  auto ep = to_json_schema(pr, EmitMode::Draft2019);
  CHECK(serialize(ep.schema).find("x-") == std::string::npos);
  auto back = from_json_schema(normalize_refs(ep.schema),
                               DraftDialect::Draft2019Subset)
                  .doc;
  CHECK(sample_equiv(pr, back));

  // contAfter is lowered into definitions
  Document ca;
  ca.root = S::cont_after(2, S::type1(JsonType::Num));
  auto ec = to_json_schema(ca, EmitMode::Draft2019);
  CHECK(serialize(ec.schema).find("x-contAfter") == std::string::npos);
  auto cb = from_json_schema(normalize_refs(ec.schema),
                             DraftDialect::Draft2019Subset)
                .doc;
  CHECK(sample_equiv(ca, cb));
}

TEST_CASE("draft06_with_not expresses counting through contains and not") {
  Document d;
  d.root = S::cnt(1, kInf, S::type1(JsonType::Str));
  auto e = to_json_schema(d, EmitMode::Draft06WithNot);
  CHECK(e.schema->get("contains"));
  CHECK(e.schema->get("minContains") == nullptr);

  Document z;
  z.root = S::cnt(0, 0, S::type1(JsonType::Str));
  auto ez = to_json_schema(z, EmitMode::Draft06WithNot);
  auto back = from_json_schema(normalize_refs(ez.schema),
                               DraftDialect::Draft06)
                  .doc;
  CHECK(sample_equiv(z, back));

  // genuinely inexpressible bounds fall back with a warning
  Document hard;
  hard.root = S::cnt(2, 3, S::type1(JsonType::Str));
  auto eh = to_json_schema(hard, EmitMode::Draft06WithNot);
  CHECK_FALSE(eh.warnings.empty());
}

TEST_CASE("round-trip preservation on composite documents") {
  const char* sources[] = {
      "{\"type\":\"object\",\"properties\":{\"a\":{\"minimum\":1}},"
      "\"required\":[\"a\"],\"minProperties\":1}",
      "{\"oneOf\":[{\"type\":\"string\"},{\"type\":\"number\"}]}",
      "{\"not\":{\"items\":{\"type\":\"integer\"}}}",
      "{\"if\":{\"required\":[\"a\"]},\"then\":{\"required\":[\"b\"]},"
      "\"else\":{\"maxProperties\":1}}",
      "{\"definitions\":{\"n\":{\"type\":\"null\"}},"
      "\"properties\":{\"x\":{\"$ref\":\"#/definitions/n\"}}}",
  };
  for (const char* src : sources) {
    auto d = translate(src);
    auto emitted = to_json_schema(d, EmitMode::Extended);
    auto back = from_json_schema(normalize_refs(emitted.schema),
                                 DraftDialect::Draft06)
                    .doc;
    CHECK(sample_equiv(d, back));
  }
}

TEST_CASE("normalize_refs never changes validation outcomes") {
  const char* sources[] = {
      "{\"properties\":{\"a\":{\"type\":\"string\"},"
      "\"b\":{\"$ref\":\"#/properties/a\"}}}",
      "{\"items\":[{\"minimum\":1},{\"$ref\":\"#/items/0\"}]}",
  };
  for (const char* src : sources) {
    auto raw = parse_json(src);
    auto norm = normalize_refs(raw);
    auto d2 = from_json_schema(norm, DraftDialect::Draft06).doc;
    auto d1 = from_json_schema(normalize_refs(raw), DraftDialect::Draft06).doc;
    CHECK(sample_equiv(d1, d2));
  }
}

TEST_CASE("uniform items ignores additionalItems with a warning") {
  auto r = from_json_schema(
      parse_json("{\"items\":{\"type\":\"integer\"},"
                 "\"additionalItems\":{\"type\":\"string\"}}"),
      DraftDialect::Draft06);
  CHECK_FALSE(r.warnings.empty());
  CHECK(valid(parse_json("[1,2]"), r.doc));
  CHECK_FALSE(valid(parse_json("[\"x\"]"), r.doc));
}
