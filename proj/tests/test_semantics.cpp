#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "algebra.hpp"
#include "generator.hpp"
#include "notelim.hpp"
#include "semantics.hpp"

using namespace jsalg;

// The recursive example: x : props("^a$" : ¬ref(x); t), after not-elimination.
static Document recursive_example() {
  Document d;
  d.root = S::ref("x");
  d.env.set("x", S::props({{Pattern::parse("^a$"), S::not_(S::ref("x"))}},
                          S::t()));
  return not_eliminate(d);
}

TEST_CASE("recursive example instances") {
  auto d = recursive_example();
  CHECK(valid(parse_json("1"), d));
  CHECK(valid(parse_json("{\"b\":2}"), d));
  CHECK(valid(parse_json("{\"a\":{\"a\":\"foo\"}}"), d));
  CHECK(valid(parse_json("{\"a\":{\"a\":{\"a\":{\"a\":null}}}}"), d));
  CHECK_FALSE(valid(parse_json("{\"a\":1}"), d));
}

TEST_CASE("typed operators hold vacuously on other types") {
  Document d;
  d.root = S::betw(NumBound::of(1), NumBound::pos_inf());
  CHECK(valid(parse_json("\"foo\""), d));  // a string is not a number
  CHECK(valid(parse_json("0.5"), d) == false);
  CHECK(valid(parse_json("1"), d));

  // one check per typed operator family
  auto j = parse_json("null");
  Env e;
  CHECK(eval_schema(j, S::len(5, 6), e));
  CHECK(eval_schema(j, S::pattern(Pattern::parse("^x$")), e));
  CHECK(eval_schema(j, S::xbetw(NumBound::of(0), NumBound::of(1)), e));
  CHECK(eval_schema(j, S::mulof(Rational(7)), e));
  CHECK(eval_schema(j, S::not_mulof(Rational(7)), e));
  CHECK(eval_schema(j, S::props({}, S::f()), e));
  CHECK(eval_schema(j, S::pro(2, 3), e));
  CHECK(eval_schema(j, S::req({"k"}), e));
  CHECK(eval_schema(j, S::pnames(S::f()), e));
  CHECK(eval_schema(j, S::pattreq({{Pattern::parse("a"), S::t()}}), e));
  CHECK(eval_schema(j, S::items({}, S::f()), e));
  CHECK(eval_schema(j, S::item_at(1, S::f()), e));
  CHECK(eval_schema(j, S::items_after(0, S::f()), e));
  CHECK(eval_schema(j, S::ite(2, 3), e));
  CHECK(eval_schema(j, S::contains(S::t()), e));
  CHECK(eval_schema(j, S::cont_after(1, S::t()), e));
  CHECK(eval_schema(j, S::cnt(1, 2, S::t()), e));
  CHECK(eval_schema(j, S::unique_items(), e));
  CHECK(eval_schema(j, S::repeated_items(), e));
}

TEST_CASE("negation is classical on samples") {
  std::vector<SchemaPtr> schemas = {
      S::len(1, 3),
      S::req({"a", "b"}),
      S::contains(S::type1(JsonType::Num)),
      S::and_({S::type1(JsonType::Obj), S::pro(1, kInf)}),
      S::pattern(Pattern::parse("^a")),
  };
  InstanceGenerator gen(5);
  for (const auto& s : schemas) gen.add_hints(s);
  Env e;
  for (int i = 0; i < 300; ++i) {
    auto j = gen.generate();
    for (const auto& s : schemas)
      CHECK(eval_schema(j, S::not_(s), e) == !eval_schema(j, s, e));
  }
}

TEST_CASE("cnt subsumes contains and ite") {
  auto inner = S::type1(JsonType::Str);
  InstanceGenerator gen(9);
  gen.add_hints(S::contains(inner));
  Env e;
  for (int i = 0; i < 300; ++i) {
    auto j = gen.generate();
    CHECK(eval_schema(j, S::contains(inner), e) ==
          eval_schema(j, S::cnt(1, kInf, inner), e));
    CHECK(eval_schema(j, S::ite(1, 2), e) ==
          eval_schema(j, S::cnt(1, 2, S::t()), e));
  }
  // spot checks
  CHECK(eval_schema(parse_json("[\"a\",1,\"b\"]"), S::cnt(2, 2, inner), e));
  CHECK_FALSE(eval_schema(parse_json("[\"a\",\"b\"]"), S::cnt(0, 1, inner), e));
  CHECK(eval_schema(parse_json("[]"), S::cnt(0, 0, inner), e));
}

TEST_CASE("props clause: matching patterns and the additional branch") {
  Env e;
  // value must satisfy every matching pattern's schema
  auto s = S::props({{Pattern::parse("^a"), S::type1(JsonType::Num)},
                     {Pattern::parse("b$"), S::betw(NumBound::of(5), NumBound::pos_inf())}},
                    S::type1(JsonType::Str));
  CHECK(eval_schema(parse_json("{\"ab\":7}"), s, e));        // both match
  CHECK_FALSE(eval_schema(parse_json("{\"ab\":3}"), s, e));  // fails second
  CHECK(eval_schema(parse_json("{\"ax\":3}"), s, e));        // only first
  CHECK(eval_schema(parse_json("{\"zz\":\"str\"}"), s, e));  // additional
  CHECK_FALSE(eval_schema(parse_json("{\"zz\":3}"), s, e));  // additional fails
  CHECK(eval_schema(parse_json("{}"), s, e));
}

TEST_CASE("uniqueItems uses deep equality with rational numbers") {
  Env e;
  CHECK_FALSE(eval_schema(parse_json("[1,1.0]"), S::unique_items(), e));
  CHECK(eval_schema(parse_json("[1,true]"), S::unique_items(), e));
  CHECK_FALSE(eval_schema(parse_json("[{\"a\":1},{\"a\":1}]"),
                          S::unique_items(), e));
  CHECK(eval_schema(parse_json("[1,1]"), S::repeated_items(), e));
  CHECK_FALSE(eval_schema(parse_json("[1,2]"), S::repeated_items(), e));
}

TEST_CASE("mulOf decides divisibility exactly") {
  Env e;
  CHECK(eval_schema(parse_json("0.3"), S::mulof(rational_from_decimal("0.1")), e));
  CHECK_FALSE(eval_schema(parse_json("0.25"), S::mulof(rational_from_decimal("0.1")), e));
  CHECK(eval_schema(parse_json("-6"), S::mulof(Rational(3)), e));
  CHECK(eval_schema(parse_json("0"), S::mulof(Rational(3)), e));
}

TEST_CASE("validate reports a trace on failure") {
  Document d;
  d.root = S::type1(JsonType::Obj);
  auto out = validate(parse_json("3"), d);
  CHECK_FALSE(out.valid);
  CHECK_FALSE(out.trace.empty());
  auto ok = validate(parse_json("{}"), d);
  CHECK(ok.valid);
  CHECK(ok.trace.empty());
}

TEST_CASE("validate enforces well-formedness preconditions") {
  Document d;
  d.root = S::ref("x");
  d.env.set("x", S::not_(S::ref("x")));
  CHECK_THROWS_AS(validate(parse_json("1"), d), UnguardedError);

  Document m;
  m.root = S::ref("ghost");
  CHECK_THROWS_AS(validate(parse_json("1"), m), NotClosingError);
}

TEST_CASE("equiv_sample finds trivial differences and equivalences") {
  Document t_doc, f_doc;
  t_doc.root = S::t();
  f_doc.root = S::f();
  InstanceGenerator gen(0);
  auto verdict = equiv_sample(t_doc, f_doc, gen, 50);
  CHECK_FALSE(verdict.indistinguishable);
  REQUIRE(verdict.counterexample);
  CHECK(verdict.valid_in_first);

  // S vs ¬¬S
  Document s1, s2;
  s1.root = S::and_({S::type1(JsonType::Num), S::betw(NumBound::of(1), NumBound::of(9))});
  s2.root = S::not_(S::not_(s1.root));
  InstanceGenerator gen2(0);
  gen2.add_hints(s1);
  CHECK(equiv_sample(s1, s2, gen2, 500).indistinguishable);
}

TEST_CASE("guarded recursion terminates on deep instances") {
  // linked list: value required, next recursive
  Document d;
  d.root = S::ref("node");
  d.env.set("node",
            S::and_({S::type1(JsonType::Obj), S::req({"value"}),
                     S::props({{Pattern::parse("^next$"), S::ref("node")},
                               {Pattern::parse("^value$"), S::type1(JsonType::Num)}},
                              S::t())}));
  std::string deep = "{\"value\":0}";
  for (int i = 0; i < 40; ++i)
    deep = "{\"value\":1,\"next\":" + deep + "}";
  CHECK(valid(parse_json(deep), d));
  CHECK_FALSE(valid(parse_json("{\"value\":1,\"next\":{}}"), d));
}
