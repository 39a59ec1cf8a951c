// Acceptance suite: one pass/fail line per criterion.  argv[1] is the
// repository source directory (for the bundled corpus and the vendored
// validation test suite).
#include "algebra.hpp"
#include "generator.hpp"
#include "notelim.hpp"
#include "semantics.hpp"
#include "translate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace jsalg;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

static int failures = 0;

static void report(int criterion, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": "
            << what << std::endl;
  if (!ok) ++failures;
}

static std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static Document load_schema_file(const fs::path& p) {
  auto raw = parse_json(read_file(p));
  auto dialect = infer_dialect(raw);
  return from_json_schema(normalize_refs(raw), dialect).doc;
}

static Document doc_of(SchemaPtr s) {
  Document d;
  d.root = std::move(s);
  return d;
}

static std::vector<fs::path> corpus_files(const fs::path& src) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(src / "corpus" / "bundled"))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

// ---------------------------------------------------------------------------
// 1. T-shirt reproduction
static void criterion1(const fs::path& src) {
  try {
    auto before = load_schema_file(src / "corpus" / "bundled" / "tshirt.json");
    auto expected =
        load_schema_file(src / "corpus" / "bundled" / "tshirt-rewritten.json");
    auto t0 = Clock::now();
    auto after = not_eliminate(before);
    double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    bool neg_free = is_negation_free(after);
    InstanceGenerator gen(0);
    gen.add_hints(before);
    gen.add_hints(expected);
    auto v1 = equiv_sample(after, expected, gen, 500);
    InstanceGenerator gen2(0);
    gen2.add_hints(before);
    auto v2 = equiv_sample(before, after, gen2, 500);
    bool ok = neg_free && v1.indistinguishable && v2.indistinguishable &&
              ms < 1000.0;
    std::ostringstream what;
    what << "T-shirt not-elimination equals the rewritten figure on 500 "
            "instances, negation-free, "
         << ms << " ms";
    if (!v1.indistinguishable)
      what << " [counterexample vs rewritten: " << serialize(v1.counterexample)
           << "]";
    report(1, ok, what.str());
  } catch (const std::exception& e) {
    report(1, false, std::string("exception: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// 2. Recursive example reproduction
static void criterion2(const fs::path&) {
  try {
    Document d;
    d.root = S::ref("x");
    d.env.set("x", S::props({{Pattern::parse("^a$"), S::not_(S::ref("x"))}},
                            S::t()));
    auto out = not_eliminate(d);
    bool ok = is_negation_free(out);
    ok = ok && valid(parse_json("1"), out);
    ok = ok && valid(parse_json("{\"b\":2}"), out);
    ok = ok && valid(parse_json("{\"a\":{\"a\":\"foo\"}}"), out);
    ok = ok && valid(parse_json("{\"a\":{\"a\":{\"a\":{\"a\":null}}}}"), out);
    ok = ok && !valid(parse_json("{\"a\":1}"), out);
    // final form up to renaming: x keeps its props shape over the dual, the
    // dual is the object-typed pattern-requirement over x
    auto x = out.env.get("x");
    ok = ok && x && x->op == Op::Props && x->pairs.size() == 1 &&
         x->pairs[0].schema->op == Op::Ref;
    auto dual = out.env.get(dual_name(out.env, "x"));
    std::string dual_txt = dual ? to_text(dual) : "";
    ok = ok && dual_txt.find("type(Obj)") != std::string::npos &&
         dual_txt.find("ref(x)") != std::string::npos;
    report(2, ok,
           "recursive example validates 1, {\"b\":2}, {\"a\":{\"a\":\"foo\"}}, "
           "the depth-4 nesting, rejects {\"a\":1}, and matches the expected "
           "final form");
  } catch (const std::exception& e) {
    report(2, false, std::string("exception: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// 3. Double-negation oracle over the corpus
static void criterion3(const fs::path& src) {
  try {
    auto files = corpus_files(src);
    auto t0 = Clock::now();
    size_t checked = 0, mismatches = 0;
    for (const auto& f : files) {
      auto d = load_schema_file(f);
      Document negated = d;
      negated.root = S::not_(d.root);
      auto elim = not_eliminate(negated);
      InstanceGenerator gen(0);
      gen.add_hints(d);
      for (int i = 0; i < 200; ++i) {
        auto j = gen.generate();
        bool direct = valid(j, d);
        bool via_not = valid(j, negated);
        bool via_elim = valid(j, elim);
        ++checked;
        if (via_not != !direct || via_elim != !direct) {
          ++mismatches;
          if (mismatches == 1)
            std::cerr << "criterion 3 first mismatch: " << f.filename()
                      << " instance " << serialize(j) << "\n";
        }
      }
    }
    double s =
        std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream what;
    what << files.size() << " schemas x 200 instances, " << mismatches
         << " mismatches out of " << checked << " checks, " << s << " s";
    report(3, mismatches == 0 && s < 60.0 && files.size() >= 45, what.str());
  } catch (const std::exception& e) {
    report(3, false, std::string("exception: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// 4. Counting encodings vs brute force
static void criterion4(const fs::path&) {
  try {
    size_t mismatches = 0, checks = 0;
    // keys: n in 1..4, objects over an (n+2)-key superset, 1-value domain
    for (int n = 1; n <= 4; ++n) {
      std::vector<std::string> keys;
      for (int i = 0; i < n; ++i) keys.push_back(std::string(1, char('a' + i)));
      auto [root, cenv] = counting_env_for_keys(keys);
      Document enc;
      enc.root = root;
      for (const auto& [name, body] : cenv.env.defs()) enc.env.set(name, body);
      std::vector<PropPair> pairs;
      for (const auto& k : keys) pairs.push_back({Pattern::literal(k), S::t()});
      Document neg = doc_of(S::not_(S::props(std::move(pairs), S::f())));
      std::vector<std::string> super = keys;
      super.push_back("y");
      super.push_back("z");
      for (uint32_t mask = 0; mask < (1u << super.size()); ++mask) {
        JsonValue::Members m;
        for (size_t i = 0; i < super.size(); ++i)
          if (mask & (1u << i))
            m.emplace_back(super[i], JsonValue::make_num(Rational(1)));
        auto j = JsonValue::make_obj(std::move(m));
        ++checks;
        if (valid(j, enc) != valid(j, neg)) ++mismatches;
      }
    }
    // contAfter: n in 0..3, boolean arrays of length <= 6
    auto is_true = S::constant(JsonValue::make_bool(true));
    for (uint64_t n = 0; n <= 3; ++n) {
      auto [root, cenv] = lower_cont_after(n, is_true);
      Document low;
      low.root = root;
      for (const auto& [name, body] : cenv.env.defs()) low.env.set(name, body);
      Document direct = doc_of(S::cont_after(n, is_true));
      for (int len = 0; len <= 6; ++len) {
        for (uint32_t mask = 0; mask < (1u << len); ++mask) {
          JsonValue::Array a;
          for (int i = 0; i < len; ++i)
            a.push_back(JsonValue::make_bool((mask >> i) & 1));
          auto j = JsonValue::make_arr(std::move(a));
          ++checks;
          if (valid(j, low) != valid(j, direct)) ++mismatches;
        }
      }
    }
    std::ostringstream what;
    what << "counting encodings vs exhaustive enumeration: " << mismatches
         << " mismatches in " << checks << " checks";
    report(4, mismatches == 0, what.str());
  } catch (const std::exception& e) {
    report(4, false, std::string("exception: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// 5. Size behavior
static uint64_t env_symbol_count(const SchemaPtr& root, const Env& env) {
  uint64_t total = size_of(root);
  for (const auto& [name, body] : env.defs()) total += 1 + size_of(body);
  return total;
}

// "fits O(x) within 2x": some model a*x + b (a > 0, b >= 0; b absorbs the
// constant overhead of the root formula) has every data point within a
// factor of 2.  For a fixed slope a the admissible intercepts form an
// interval per point (y/2 - a*x <= b <= 2y - a*x), so feasibility is an
// interval intersection; the slope is scanned over a fine grid
static bool fits_within_2x(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
  double slope_hint = ys.back() / xs.back();
  for (int step = 1; step <= 400; ++step) {
    double a = slope_hint * 2.0 * double(step) / 400.0;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < xs.size(); ++i) {
      lo = std::max(lo, ys[i] / 2.0 - a * xs[i]);
      hi = std::min(hi, 2.0 * ys[i] - a * xs[i]);
    }
    if (lo <= hi) return true;
  }
  return false;
}

static void criterion5(const fs::path& src) {
  try {
    auto files = corpus_files(src);
    double sum_ratio = 0, max_ratio = 0, fitted_k = 0;
    for (const auto& f : files) {
      auto d = load_schema_file(f);
      auto out = not_eliminate(d);
      auto r = stats(d, out, 0.0);
      sum_ratio += r.ratio;
      max_ratio = std::max(max_ratio, r.ratio);
      double k = double(size_of(out)) / double(size_of(d));
      fitted_k = std::max(fitted_k, k);
    }
    double avg_ratio = sum_ratio / double(files.size());

    std::vector<double> quad_x, quad_y;
    for (int n = 1; n <= 16; ++n) {
      std::vector<std::string> keys;
      for (int i = 0; i < n; ++i) keys.push_back("k" + std::to_string(i));
      auto [root, cenv] = counting_env_for_keys(keys);
      quad_x.push_back(double(n) * double(n));
      quad_y.push_back(double(env_symbol_count(root, cenv.env)));
    }
    bool quad_ok = fits_within_2x(quad_x, quad_y);

    std::vector<double> lin_x, lin_y;
    for (int k = 2; k <= 32; ++k) {
      std::vector<SchemaPtr> args;
      for (int i = 0; i < k; ++i)
        args.push_back(S::and_({S::type1(JsonType::Num),
                                S::betw(NumBound::of(i), NumBound::of(i))}));
      auto d = simplify(doc_of(S::one_of(args)), OneOfMode::Linear);
      lin_x.push_back(double(k));
      lin_y.push_back(double(env_symbol_count(d.root, d.env)));
    }
    bool lin_ok = fits_within_2x(lin_x, lin_y);

    bool ok = avg_ratio <= 5.0 && max_ratio <= 30.0 && quad_ok && lin_ok;
    std::ostringstream what;
    what << "avg size ratio " << avg_ratio << " (<= 5), max " << max_ratio
         << " (<= 30), fitted K = " << fitted_k
         << "; counting env fits O(n^2) within 2x for n in 1..16: "
         << (quad_ok ? "yes" : "no")
         << "; linear oneOf env fits O(n) within 2x for 2..32 args: "
         << (lin_ok ? "yes" : "no");
    report(5, ok, what.str());
  } catch (const std::exception& e) {
    report(5, false, std::string("exception: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// 6. Pattern algebra
static void collect_patterns(const JsonPtr& v, std::set<std::string>& out) {
  if (v->is_obj()) {
    for (const auto& [k, val] : v->as_obj()) {
      if (k == "pattern" && val->is_str()) out.insert(val->as_str());
      if ((k == "patternProperties" || k == "x-pattReq") && val->is_obj())
        for (const auto& [pk, pv] : val->as_obj()) out.insert(pk);
      collect_patterns(val, out);
    }
  } else if (v->is_arr()) {
    for (const auto& e : v->as_arr()) collect_patterns(e, out);
  }
}

static void criterion6(const fs::path& src) {
  try {
    std::set<std::string> sources;
    for (const auto& f : corpus_files(src))
      collect_patterns(parse_json(read_file(f)), sources);
    std::vector<PatternPtr> pats;
    for (const auto& s : sources) {
      try {
        pats.push_back(Pattern::parse(s));
      } catch (const PatternError&) {
        // unsupported dialect occurrences are excluded by contract
      }
    }
    bool enough = pats.size() >= 50;
    size_t mismatches = 0;
    std::mt19937_64 rng(0);
    static const char chars[] = "abcxyzNEXTSTRING0123._-@ ";
    for (const auto& p : pats) {
      auto c = Pattern::complement(p);
      for (int i = 0; i < 1000; ++i) {
        std::string s;
        size_t len = rng() % 12;
        for (size_t k = 0; k < len; ++k)
          s += chars[rng() % (sizeof(chars) - 1)];
        if (p->matches(s) == c->matches(s)) ++mismatches;
      }
    }
    // De Morgan by product-emptiness on sampled pairs
    bool demorgan = true;
    for (size_t i = 0; i + 1 < pats.size() && i < 20; i += 2) {
      const auto& a = pats[i]->dfa();
      const auto& b = pats[i + 1]->dfa();
      // And(a,b) == Not(Not(a) | Not(b))
      demorgan = demorgan &&
                 equivalent(intersect(a, b),
                            complement(dfa_union(complement(a), complement(b))));
      // Not(a & b) == Not(a) | Not(b)
      demorgan = demorgan &&
                 equivalent(complement(intersect(a, b)),
                            dfa_union(complement(a), complement(b)));
      demorgan = demorgan && is_empty(intersect(a, complement(a)));
    }
    std::ostringstream what;
    what << pats.size() << " corpus patterns x 1000 strings: " << mismatches
         << " complement mismatches; De Morgan identities "
         << (demorgan ? "hold" : "VIOLATED");
    report(6, enough && mismatches == 0 && demorgan, what.str());
  } catch (const std::exception& e) {
    report(6, false, std::string("exception: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// 7. Not-pushing row coverage
static void criterion7(const fs::path&) {
  try {
    auto str = S::type1(JsonType::Str);
    auto num = S::type1(JsonType::Num);
    std::vector<std::pair<std::string, SchemaPtr>> rows = {
        {"t", S::t()},
        {"f", S::f()},
        {"not", S::not_(S::len(1, 2))},
        {"and", S::and_({str, S::len(1, 2)})},
        {"or", S::or_({str, num})},
        {"type", S::type1(JsonType::Obj)},
        {"const-bool", S::constant(JsonValue::make_bool(true))},
        {"const-other", S::constant(parse_json("{\"a\":[1]}"))},
        {"enum", S::enumeration({parse_json("1"), parse_json("\"x\"")})},
        {"len", S::len(2, 4)},
        {"pattern", S::pattern(Pattern::parse("^a+$"))},
        {"betw", S::betw(NumBound::of(1), NumBound::of(5))},
        {"xBetw", S::xbetw(NumBound::of(1), NumBound::of(5))},
        {"mulOf", S::mulof(Rational(3))},
        {"notMulOf", S::not_mulof(Rational(3))},
        {"props", S::props({{Pattern::parse("^p"), num}}, str)},
        {"pro", S::pro(1, 2)},
        {"req", S::req({"a", "b"})},
        {"pNames", S::pnames(S::len(0, 2))},
        {"pattReq", S::pattreq({{Pattern::parse("^p"), num}})},
        {"items", S::items({num, str}, S::f())},
        {"itemAt", S::item_at(2, num)},
        {"itemsAfter", S::items_after(1, num)},
        {"ite", S::ite(1, 3)},
        {"contains", S::contains(num)},
        {"contAfter", S::cont_after(1, num)},
        {"cnt", S::cnt(2, 3, num)},
        {"uniqueItems", S::unique_items()},
        {"repeatedItems", S::repeated_items()},
        {"implies", S::implies(S::req({"a"}), S::req({"b"}))},
        {"ifThenElse", S::if_then_else(str, S::len(1, 2), num)},
        {"oneOf", S::one_of({str, num, S::len(0, 1)})},
    };
    std::vector<std::string> failed;
    for (const auto& [name, lhs] : rows) {
      auto negated = doc_of(S::not_(lhs));
      auto out = not_eliminate(negated);
      bool ok = is_negation_free(out);
      InstanceGenerator gen(0);
      gen.add_hints(negated);
      ok = ok && equiv_sample(negated, out, gen, 200).indistinguishable;
      if (!ok) failed.push_back(name);
    }
    // ¬ref(x) through the dual definition
    {
      Document d;
      d.root = S::not_(S::ref("x"));
      d.env.set("x", S::props({{Pattern::parse("^a$"), S::ref("x")}}, S::t()));
      auto out = not_eliminate(d);
      InstanceGenerator gen(0);
      gen.add_hints(d);
      if (!is_negation_free(out) ||
          !equiv_sample(d, out, gen, 200).indistinguishable)
        failed.push_back("ref");
    }
    std::ostringstream what;
    what << (rows.size() + 1)
         << " not-pushing rows, sample-equivalent on 200 instances each";
    if (!failed.empty()) {
      what << "; failing rows:";
      for (const auto& f : failed) what << " " << f;
    }
    report(7, failed.empty(), what.str());
  } catch (const std::exception& e) {
    report(7, false, std::string("exception: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// 8. Validator conformance
static void criterion8(const fs::path& src) {
  try {
    size_t applicable = 0, passed = 0, neg_checked = 0, neg_agree = 0;
    for (const auto& e :
         fs::directory_iterator(src / "corpus" / "testsuite")) {
      if (e.path().extension() != ".json") continue;
      auto groups = parse_json(read_file(e.path()));
      for (const auto& g : groups->as_arr()) {
        Document d;
        Document negd;
        try {
          auto raw = g->get("schema");
          auto dialect = infer_dialect(raw);
          d = from_json_schema(normalize_refs(raw), dialect).doc;
          negd = d;
          negd.root = S::not_(d.root);
          negd = not_eliminate(negd);
        } catch (const std::exception&) {
          continue;  // excluded dialect/keyword: not applicable
        }
        for (const auto& t : g->get("tests")->as_arr()) {
          bool expected = t->get("valid")->as_bool();
          ++applicable;
          bool got = valid(t->get("data"), d);
          if (got == expected) ++passed;
          ++neg_checked;
          if (valid(t->get("data"), negd) == !got) ++neg_agree;
        }
      }
    }
    double rate = applicable ? double(passed) / double(applicable) : 0.0;
    bool ok = applicable > 0 && rate >= 0.95 && neg_agree == neg_checked;
    std::ostringstream what;
    what << passed << "/" << applicable << " validation cases ("
         << 100.0 * rate << "%), double-negation agreement " << neg_agree
         << "/" << neg_checked;
    report(8, ok, what.str());
  } catch (const std::exception& e) {
    report(8, false, std::string("exception: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// 9. Guardedness gate
static void criterion9(const fs::path& src) {
  try {
    Document neg_cycle;
    neg_cycle.root = S::ref("x");
    neg_cycle.env.set("x", S::not_(S::ref("x")));
    bool rejected_neg = check_guarded(neg_cycle).has_value();
    bool threw_neg = false;
    try {
      not_eliminate(neg_cycle);
    } catch (const UnguardedError&) {
      threw_neg = true;
    }

    Document id_cycle;
    id_cycle.root = S::ref("x");
    id_cycle.env.set("x", S::ref("x"));
    bool rejected_id = check_guarded(id_cycle).has_value();

    auto rec = load_schema_file(src / "corpus" / "bundled" /
                                "root-recursive.json");
    bool accepted_rec = !check_guarded(rec).has_value();
    bool elim_rec = is_negation_free(not_eliminate(rec));

    Document ex;
    ex.root = S::ref("x");
    ex.env.set("x", S::props({{Pattern::parse("^a$"), S::not_(S::ref("x"))}},
                             S::t()));
    bool accepted_ex = !check_guarded(ex).has_value();

    bool ok = rejected_neg && threw_neg && rejected_id && accepted_rec &&
              elim_rec && accepted_ex;
    report(9, ok,
           "unguarded x:¬x and x:x rejected; the root-recursive appendix "
           "schema and the recursive example accepted and eliminable");
  } catch (const std::exception& e) {
    report(9, false, std::string("exception: ") + e.what());
  }
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <source-dir>\n";
    return 2;
  }
  fs::path src = argv[1];
  criterion1(src);
  criterion2(src);
  criterion3(src);
  criterion4(src);
  criterion5(src);
  criterion6(src);
  criterion7(src);
  criterion8(src);
  criterion9(src);
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
