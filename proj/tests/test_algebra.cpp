#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "algebra.hpp"
#include "generator.hpp"
#include "semantics.hpp"

using namespace jsalg;

TEST_CASE("free_vars") {
  CHECK(free_vars(S::ref("x")) == std::set<std::string>{"x"});
  auto s = S::props({{Pattern::parse("^r"), S::ref("y")}}, S::ref("z"));
  CHECK(free_vars(s) == std::set<std::string>({"y", "z"}));
  CHECK(free_vars(S::t()).empty());
  CHECK(free_vars(S::if_then_else(S::ref("a"), S::ref("b"), S::ref("c"))) ==
        std::set<std::string>({"a", "b", "c"}));
}

TEST_CASE("guardedness: direct unguarded cycle") {
  Document d;
  d.root = S::ref("x");
  d.env.set("x", S::not_(S::ref("x")));
  auto cycle = check_guarded(d);
  REQUIRE(cycle.has_value());
  CHECK(cycle->front() == "x");
  CHECK(cycle->back() == "x");
}

TEST_CASE("guardedness: identity cycle is also unguarded") {
  Document d;
  d.root = S::ref("x");
  d.env.set("x", S::ref("x"));
  CHECK(check_guarded(d).has_value());
}

TEST_CASE("guardedness: typed operators guard their children") {
  // x : items(ref(y); ref(w)) ∧ ref(z) — only x→z is unguarded; acyclic
  Document d;
  d.root = S::ref("x");
  d.env.set("x", S::and_({S::items({S::ref("y")}, S::ref("w")), S::ref("z")}));
  d.env.set("y", S::t());
  d.env.set("w", S::t());
  d.env.set("z", S::t());
  CHECK_FALSE(check_guarded(d).has_value());

  // but an unguarded path through z back to x is a cycle
  d.env.set("z", S::not_(S::ref("x")));
  CHECK(check_guarded(d).has_value());

  // guarded mutual recursion is fine
  Document m;
  m.root = S::ref("a");
  m.env.set("a", S::props({{Pattern::parse("^k$"), S::ref("b")}}, S::t()));
  m.env.set("b", S::contains(S::ref("a")));
  CHECK_FALSE(check_guarded(m).has_value());
}

TEST_CASE("guardedness: undefined variable is a closing error") {
  Document d;
  d.root = S::ref("nowhere");
  CHECK_THROWS_AS(check_guarded(d), NotClosingError);
}

TEST_CASE("trivial document is guarded") {
  Document d;
  d.root = S::ref("x");
  d.env.set("x", S::t());
  CHECK_FALSE(check_guarded(d).has_value());
}

TEST_CASE("weighted size") {
  CHECK(size_of(S::t()) == 1);
  // itemAt(8, t): 1 + ceil(log2(9)) + 1 = 1 + 4 + 1
  CHECK(size_of(S::item_at(8, S::t())) == 6);
  // and(x,y) costs 1 + both children; note the constructors fold trivial
  // operands (and(t,f) is built as f), so non-trivial children are used here
  CHECK(size_of(S::and_({S::len(1, 2), S::pro(1, 2)})) ==
        1 + size_of(S::len(1, 2)) + size_of(S::pro(1, 2)));
  // patterns cost their source length
  auto p = S::pattern(Pattern::parse("abc"));
  CHECK(size_of(p) == 1 + 3);
  // strict monotonicity under embedding
  auto inner = S::len(1, 2);
  CHECK(size_of(S::not_(inner)) > size_of(inner));
  CHECK(size_of(S::or_({inner, S::req({"k"})})) > size_of(inner));
  CHECK(size_of(S::contains(inner)) > size_of(inner));
}

TEST_CASE("expand_derived rewrites the sugar connectives") {
  auto a = S::type1(JsonType::Str);
  auto b = S::len(1, 2);

  auto imp = expand_derived(S::implies(a, b));
  REQUIRE(imp->op == Op::Or);
  CHECK(imp->kids[0]->op == Op::Not);

  auto ite = expand_derived(S::if_then_else(a, b, S::t()));
  REQUIRE(ite->op == Op::Or);
  REQUIRE(ite->kids.size() == 2);
  CHECK(ite->kids[0]->op == Op::And);

  CHECK(expand_derived(S::one_of({a}))->op == a->op);
  CHECK(expand_derived(S::group({a, b}))->op == Op::And);
}

TEST_CASE("expand_derived preserves validation outcomes") {
  std::vector<SchemaPtr> schemas = {
      S::implies(S::type1(JsonType::Num), S::betw(NumBound::of(0), NumBound::pos_inf())),
      S::if_then_else(S::req({"a"}), S::req({"b"}), S::req({"c"})),
      S::one_of({S::type1(JsonType::Str), S::len(0, 1), S::betw(NumBound::of(5), NumBound::pos_inf())}),
      S::enumeration({parse_json("1"), parse_json("\"x\""), parse_json("[1]")}),
      S::group({S::pro(1, 2), S::req({"k"})}),
  };
  for (const auto& s : schemas) {
    Document d1, d2;
    d1.root = s;
    d2.root = expand_derived(s);
    InstanceGenerator gen(11);
    gen.add_hints(d1);
    for (int i = 0; i < 200; ++i) {
      auto j = gen.generate();
      CHECK(valid(j, d1) == valid(j, d2));
    }
  }
}

TEST_CASE("smart constructors normalize illegal and trivial bounds") {
  // lo > hi collapses to f; full-range to t (the not-pushing rules rely on it)
  CHECK(S::ite(3, 1)->op == Op::False);
  CHECK(S::len(0, kInf)->op == Op::True);
  CHECK(S::pro(0, kInf)->op == Op::True);
  CHECK(S::betw(NumBound::neg_inf(), NumBound::pos_inf())->op == Op::True);
  CHECK(S::betw(NumBound::of(2), NumBound::of(1))->op == Op::False);
  CHECK(S::len(1, 4)->op == Op::Len);
}

TEST_CASE("text serialization round-trips") {
  const char* texts[] = {
      "t",
      "(type(Obj) ∧ props(\"^a$\": ref(x); t)) defs(x : ¬betw(1, inf))",
      "cnt(2, inf, const({\"a\":[1,2.5]}))",
      "oneOf(len(1, 2), pattern(\"^x\"), enum(1, \"s\", null))",
      "(itemsAfter(3, uniqueItems) ∨ contAfter(0, f))",
      "ifThenElse(req(\"a\", \"b\"), pNames(len(0, 3)), mulOf(0.5))",
      "pattReq(\"^k\": notMulOf(3)) defs(\"odd name\" : repeatedItems)",
  };
  for (const char* t : texts) {
    auto d = document_from_text(t);
    auto once = to_text(d);
    auto twice = to_text(document_from_text(once));
    CHECK(once == twice);
  }
}

TEST_CASE("parser rejects nested defs and malformed input") {
  CHECK_THROWS_AS(document_from_text("t defs(x : t defs(y : t))"),
                  AlgebraParseError);
  CHECK_THROWS_AS(document_from_text("betw(2)"), AlgebraParseError);
  CHECK_THROWS_AS(document_from_text("wat(1)"), AlgebraParseError);
  CHECK_THROWS_AS(document_from_text(""), AlgebraParseError);
}

TEST_CASE("schema_from_text and to_text agree on operator spelling") {
  auto s = schema_from_text("(¬ref(x) ⇒ xBetw(-inf, 3))");
  REQUIRE(s->op == Op::Implies);
  CHECK(to_text(s) == "(¬ref(x) ⇒ xBetw(-inf, 3))");
}

TEST_CASE("numeric bound helpers") {
  CHECK(le_lower(NumBound::neg_inf(), Rational(-100)));
  CHECK(le_lower(NumBound::of(1), Rational(1)));
  CHECK_FALSE(lt_lower(NumBound::of(1), Rational(1)));
  CHECK(le_upper(Rational(3), NumBound::of(3)));
  CHECK_FALSE(lt_upper(Rational(3), NumBound::of(3)));
  CHECK(lt_upper(Rational(3), NumBound::pos_inf()));
}
