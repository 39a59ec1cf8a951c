#include "notelim.hpp"

#include <functional>
#include <map>
#include <set>

namespace jsalg {

// ---------------------------------------------------------------------------
// Structural equality

bool schema_equal(const SchemaPtr& a, const SchemaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->op != b->op) return false;
  if (a->types != b->types) return false;
  if ((a->value != nullptr) != (b->value != nullptr)) return false;
  if (a->value && !deep_equal(a->value, b->value)) return false;
  if (a->values.size() != b->values.size()) return false;
  for (size_t i = 0; i < a->values.size(); ++i) {
    if (!deep_equal(a->values[i], b->values[i])) return false;
  }
  if (a->nlo != b->nlo || a->nhi != b->nhi) return false;
  if (!(a->qlo == b->qlo) || !(a->qhi == b->qhi)) return false;
  if (a->q != b->q) return false;
  if ((a->pattern != nullptr) != (b->pattern != nullptr)) return false;
  if (a->pattern && a->pattern->source() != b->pattern->source()) return false;
  if (a->pairs.size() != b->pairs.size()) return false;
  for (size_t i = 0; i < a->pairs.size(); ++i) {
    if (a->pairs[i].pat->source() != b->pairs[i].pat->source()) return false;
    if (!schema_equal(a->pairs[i].schema, b->pairs[i].schema)) return false;
  }
  if ((a->child != nullptr) != (b->child != nullptr)) return false;
  if (a->child && !schema_equal(a->child, b->child)) return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i) {
    if (!schema_equal(a->kids[i], b->kids[i])) return false;
  }
  return a->names == b->names;
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

uint64_t ceil_log2_u(uint64_t x) {
  uint64_t l = 0;
  while ((uint64_t(1) << l) < x) ++l;
  return l;
}

SchemaPtr keyprops_forbid(const std::string& key) {
  // props(⟨⟨k⟩⟩ : f ; t): the member k must be absent
  return S::props({{Pattern::literal(key), S::f()}}, S::t());
}

// const elimination (Fig. "Elimination of enum and const."); boolean
// constants are kept.
SchemaPtr const_eliminate(const JsonPtr& v) {
  switch (v->type()) {
    case JsonType::Null:
      return S::type1(JsonType::Null);
    case JsonType::Bool:
      return S::constant(v);
    case JsonType::Num:
      return S::and_({S::type1(JsonType::Num),
                      S::betw(NumBound::of(v->as_num()),
                              NumBound::of(v->as_num()))});
    case JsonType::Str:
      return S::and_({S::type1(JsonType::Str),
                      S::pattern(Pattern::literal(v->as_str()))});
    case JsonType::Arr: {
      const auto& xs = v->as_arr();
      std::vector<SchemaPtr> conj{S::type1(JsonType::Arr),
                                  S::ite(xs.size(), xs.size())};
      for (size_t i = 0; i < xs.size(); ++i) {
        conj.push_back(S::item_at(i + 1, const_eliminate(xs[i])));
      }
      return S::and_(std::move(conj));
    }
    case JsonType::Obj: {
      const auto& ms = v->as_obj();
      std::vector<SchemaPtr> conj{S::type1(JsonType::Obj),
                                  S::pro(0, ms.size())};
      std::vector<std::string> keys;
      for (const auto& [k, x] : ms) {
        keys.push_back(k);
        conj.push_back(
            S::props({{Pattern::literal(k), const_eliminate(x)}}, S::t()));
      }
      if (!keys.empty()) conj.insert(conj.begin() + 1, S::req(keys));
      return S::and_(std::move(conj));
    }
  }
  return S::f();
}

// props(r1:S1,..,rn:Sn;Sa) as a conjunction of unary props with additional=t
SchemaPtr props_to_unary(const SchemaPtr& s) {
  std::vector<SchemaPtr> conj;
  PatternPtr all = Pattern::none();
  for (const auto& p : s->pairs) {
    conj.push_back(S::props({{p.pat, p.schema}}, S::t()));
    all = Pattern::alt(all, p.pat);
  }
  if (s->child && s->child->op != Op::True) {
    conj.push_back(
        S::props({{Pattern::complement(all), s->child}}, S::t()));
  }
  return S::and_(std::move(conj));
}

// items(S1..Sn;Sa) as itemAt/itemsAfter
SchemaPtr items_to_positional(const SchemaPtr& s) {
  std::vector<SchemaPtr> conj;
  for (size_t i = 0; i < s->kids.size(); ++i) {
    conj.push_back(S::item_at(i + 1, s->kids[i]));
  }
  if (s->child && s->child->op != Op::True) {
    conj.push_back(S::items_after(s->kids.size(), s->child));
  }
  return S::and_(std::move(conj));
}

std::vector<JsonType> other_types(const std::vector<JsonType>& ts) {
  std::vector<JsonType> out;
  for (int i = 0; i < 6; ++i) {
    JsonType t = JsonType(i);
    bool in = false;
    for (JsonType u : ts) in = in || u == t;
    if (!in) out.push_back(t);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Simplification (steps 1-5)

namespace {

class Simplifier {
 public:
  Simplifier(const Env& orig, OneOfMode mode) : orig_(orig), mode_(mode) {}

  Env out;

  std::string fresh(const std::string& base) {
    for (;;) {
      std::string name = "_" + base + std::to_string(++counter_);
      if (!orig_.has(name) && !out.has(name)) return name;
    }
  }

  // binds non-leaf schemas to fresh variables (used where an argument would
  // be duplicated)
  SchemaPtr bind(const SchemaPtr& s, const std::string& base) {
    if (s->op == Op::True || s->op == Op::False || s->op == Op::Ref) return s;
    std::string name = fresh(base);
    out.set(name, s);
    return S::ref(name);
  }

  SchemaPtr simp(const SchemaPtr& s) {
    switch (s->op) {
      // items/props are NOT expanded here: positive occurrences stay
      // compact (the unary expansion of props needs a complemented pattern
      // union, which can be large), and the not-pushing step expands them
      // on demand when a negation actually reaches them.
      case Op::Type: {
        if (s->types.size() == 1) return s;
        std::vector<SchemaPtr> alts;
        for (JsonType t : s->types) alts.push_back(S::type1(t));
        return S::or_(std::move(alts));
      }
      case Op::Const: {
        SchemaPtr e = const_eliminate(s->value);
        if (e->op == Op::Const) return e;  // boolean const stays
        return simp(e);
      }
      case Op::Enum: {
        std::vector<SchemaPtr> alts;
        for (const auto& v : s->values) {
          alts.push_back(simp(S::constant(v)));
        }
        return S::or_(std::move(alts));
      }
      case Op::PNames: {
        PatternPtr bad =
            Pattern::complement(patt_of_schema(s->child, orig_));
        return S::props({{bad, S::f()}}, S::t());
      }
      case Op::Implies:
        return S::or_({S::not_(simp(s->kids[0])), simp(s->kids[1])});
      case Op::IfThenElse: {
        SchemaPtr c = bind(simp(s->kids[0]), "if");
        return S::or_({S::and_({c, simp(s->kids[1])}),
                       S::and_({S::not_(c), simp(s->kids[2])})});
      }
      case Op::Group: {
        std::vector<SchemaPtr> kids;
        for (const auto& k : s->kids) kids.push_back(simp(k));
        return S::and_(std::move(kids));
      }
      case Op::OneOf: {
        std::vector<SchemaPtr> args;
        for (const auto& k : s->kids) args.push_back(bind(simp(k), "xor"));
        if (args.empty()) return S::f();
        if (args.size() == 1) return args[0];
        if (mode_ == OneOfMode::Naive) {
          std::vector<SchemaPtr> alts;
          for (size_t l = 0; l < args.size(); ++l) {
            std::vector<SchemaPtr> conj;
            for (size_t i = 0; i < args.size(); ++i) {
              conj.push_back(i == l ? args[i] : S::not_(args[i]));
            }
            alts.push_back(S::and_(std::move(conj)));
          }
          return S::or_(std::move(alts));
        }
        return linear_oneof(args);
      }
      case Op::Not:
        return S::not_(simp(s->child));
      case Op::And:
      case Op::Or: {
        std::vector<SchemaPtr> kids;
        for (const auto& k : s->kids) kids.push_back(simp(k));
        return s->op == Op::And ? S::and_(std::move(kids))
                                : S::or_(std::move(kids));
      }
      default: {
        // typed operators: simplify nested schemas in place
        auto copy = std::make_shared<Schema>(*s);
        bool changed = false;
        for (auto& p : copy->pairs) {
          p.schema = simp(p.schema);
          changed = true;
        }
        if (copy->child) {
          copy->child = simp(copy->child);
          changed = true;
        }
        for (auto& k : copy->kids) {
          k = simp(k);
          changed = true;
        }
        return changed ? SchemaPtr(copy) : s;
      }
    }
  }

 private:
  const Env& orig_;
  OneOfMode mode_;
  int counter_ = 0;

  // Linear encoding of oneOf: a binary tree of N (none-true) / O (exactly
  // one true) variables; padding positions contribute N=t, O=f.
  SchemaPtr linear_oneof(const std::vector<SchemaPtr>& args) {
    uint64_t q = ceil_log2_u(args.size());
    uint64_t width = uint64_t(1) << q;
    std::vector<SchemaPtr> N, O;
    for (uint64_t p = 0; p < width; ++p) {
      if (p < args.size()) {
        O.push_back(args[size_t(p)]);
        N.push_back(S::not_(args[size_t(p)]));
      } else {
        O.push_back(S::f());
        N.push_back(S::t());
      }
    }
    for (uint64_t l = 1; l <= q; ++l) {
      std::vector<SchemaPtr> N2, O2;
      for (uint64_t p = 0; p + 1 < N.size(); p += 2) {
        SchemaPtr n = S::and_({N[size_t(p)], N[size_t(p + 1)]});
        SchemaPtr o = S::or_({S::and_({O[size_t(p)], N[size_t(p + 1)]}),
                              S::and_({N[size_t(p)], O[size_t(p + 1)]})});
        N2.push_back(bind(n, "N"));
        O2.push_back(bind(o, "O"));
      }
      N = std::move(N2);
      O = std::move(O2);
    }
    return O[0];
  }
};

}  // namespace

Document simplify(const Document& d, OneOfMode mode) {
  Simplifier sim(d.env, mode);
  Document out;
  out.root = sim.simp(d.root);
  for (const auto& [name, body] : d.env.defs()) {
    out.env.set(name, sim.simp(body));
  }
  for (const auto& [name, body] : sim.out.defs()) {
    out.env.set(name, body);
  }
  out.dual_prefix = d.dual_prefix;
  return out;
}

// ---------------------------------------------------------------------------
// Not-completion

Document not_complete(const Document& d) {
  std::string prefix = "not_";
  bool clash = true;
  while (clash) {
    clash = false;
    for (const auto& [name, body] : d.env.defs()) {
      if (name.rfind(prefix, 0) == 0) {
        prefix += "_";
        clash = true;
        break;
      }
    }
  }
  Document out;
  out.root = d.root;
  out.dual_prefix = prefix;
  for (const auto& [name, body] : d.env.defs()) out.env.set(name, body);
  for (const auto& [name, body] : d.env.defs()) {
    out.env.set(prefix + name, S::not_(body));
  }
  return out;
}

std::string dual_name(const Env& env, const std::string& x) {
  const std::string prefix = "not_";
  if (x.rfind(prefix, 0) == 0 && env.has(x.substr(prefix.size()))) {
    return x.substr(prefix.size());
  }
  return prefix + x;
}

// ---------------------------------------------------------------------------
// Not-pushing

namespace {

class Pusher {
 public:
  Pusher(const Env& env, std::string prefix)
      : env_(env), prefix_(std::move(prefix)) {}

  SchemaPtr push(const SchemaPtr& s) {
    if (s->op == Op::Not) return neg(s->child);
    if (s->op == Op::Implies || s->op == Op::IfThenElse ||
        s->op == Op::OneOf || s->op == Op::Group || s->op == Op::Enum) {
      return push(expand_derived(s));
    }
    auto copy = std::make_shared<Schema>(*s);
    for (auto& p : copy->pairs) p.schema = push(p.schema);
    if (copy->child) copy->child = push(copy->child);
    for (auto& k : copy->kids) k = push(k);
    return copy;
  }

  // negation-free form of ¬s (Fig. "Not-pushing rules", extended with the
  // robustness fallbacks for non-simplified nodes)
  SchemaPtr neg(const SchemaPtr& s) {
    switch (s->op) {
      case Op::True: return S::f();
      case Op::False: return S::t();
      case Op::Not: return push(s->child);
      case Op::And: {
        std::vector<SchemaPtr> alts;
        for (const auto& k : s->kids) alts.push_back(neg(k));
        return S::or_(std::move(alts));
      }
      case Op::Or: {
        std::vector<SchemaPtr> conj;
        for (const auto& k : s->kids) conj.push_back(neg(k));
        return S::and_(std::move(conj));
      }
      case Op::Implies:
      case Op::IfThenElse:
      case Op::OneOf:
      case Op::Group:
      case Op::Enum:
        return neg(expand_derived(s));
      case Op::Type:
        return S::type(other_types(s->types));
      case Op::Const: {
        if (s->value->is_bool()) {
          return S::or_({S::type({JsonType::Null, JsonType::Num,
                                  JsonType::Str, JsonType::Arr,
                                  JsonType::Obj}),
                         S::constant(JsonValue::make_bool(
                             !s->value->as_bool()))});
        }
        return neg(const_eliminate(s->value));
      }
      case Op::Len: {
        std::vector<SchemaPtr> alts;
        if (s->nlo >= 1) alts.push_back(S::len(0, s->nlo - 1));
        if (s->nhi != kInf) alts.push_back(S::len(s->nhi + 1, kInf));
        return S::and_({S::type1(JsonType::Str), S::or_(std::move(alts))});
      }
      case Op::PatternOp:
        return S::and_({S::type1(JsonType::Str),
                        S::pattern(Pattern::complement(s->pattern))});
      case Op::Betw:
        return S::and_({S::type1(JsonType::Num),
                        S::or_({S::xbetw(NumBound::neg_inf(), s->qlo),
                                S::xbetw(s->qhi, NumBound::pos_inf())})});
      case Op::XBetw:
        return S::and_({S::type1(JsonType::Num),
                        S::or_({S::betw(NumBound::neg_inf(), s->qlo),
                                S::betw(s->qhi, NumBound::pos_inf())})});
      case Op::MulOf:
        return S::and_({S::type1(JsonType::Num), S::not_mulof(s->q)});
      case Op::NotMulOf:
        return S::and_({S::type1(JsonType::Num), S::mulof(s->q)});
      case Op::Pro: {
        std::vector<SchemaPtr> alts;
        if (s->nlo >= 1) alts.push_back(S::pro(0, s->nlo - 1));
        if (s->nhi != kInf) alts.push_back(S::pro(s->nhi + 1, kInf));
        return S::and_({S::type1(JsonType::Obj), S::or_(std::move(alts))});
      }
      case Op::Ite: {
        std::vector<SchemaPtr> alts;
        if (s->nlo >= 1) alts.push_back(S::ite(0, s->nlo - 1));
        if (s->nhi != kInf) alts.push_back(S::ite(s->nhi + 1, kInf));
        return S::and_({S::type1(JsonType::Arr), S::or_(std::move(alts))});
      }
      case Op::UniqueItems:
        return S::and_({S::type1(JsonType::Arr), S::repeated_items()});
      case Op::RepeatedItems:
        return S::and_({S::type1(JsonType::Arr), S::unique_items()});
      case Op::Props: {
        if (s->pairs.size() == 1 &&
            (!s->child || s->child->op == Op::True)) {
          return S::and_({S::type1(JsonType::Obj),
                          S::pattreq({{s->pairs[0].pat,
                                       neg(s->pairs[0].schema)}})});
        }
        return neg(props_to_unary(s));
      }
      case Op::PattReq: {
        std::vector<SchemaPtr> alts;
        for (const auto& p : s->pairs) {
          alts.push_back(
              S::and_({S::type1(JsonType::Obj),
                       S::props({{p.pat, neg(p.schema)}}, S::t())}));
        }
        return S::or_(std::move(alts));
      }
      case Op::Req: {
        std::vector<SchemaPtr> alts;
        for (const auto& k : s->names) alts.push_back(keyprops_forbid(k));
        return S::and_({S::type1(JsonType::Obj), S::or_(std::move(alts))});
      }
      case Op::PNames: {
        PatternPtr viol =
            Pattern::complement(patt_of_schema(s->child, env_));
        return S::and_({S::type1(JsonType::Obj),
                        S::pattreq({{viol, S::t()}})});
      }
      case Op::Items:
        return neg(items_to_positional(s));
      case Op::ItemAt:
        return S::and_({S::type1(JsonType::Arr),
                        S::item_at(s->nlo, neg(s->child)),
                        S::ite(s->nlo, kInf)});
      case Op::ItemsAfter:
        return S::and_({S::type1(JsonType::Arr),
                        S::cont_after(s->nlo, neg(s->child))});
      case Op::ContAfter:
        return S::and_({S::type1(JsonType::Arr),
                        S::items_after(s->nlo, neg(s->child))});
      case Op::Contains:
        // contains(S) = cnt(1,∞,S); self-dual counting rule
        return S::and_({S::type1(JsonType::Arr),
                        S::cnt(0, 0, push(s->child))});
      case Op::Cnt: {
        SchemaPtr body = push(s->child);
        std::vector<SchemaPtr> alts;
        if (s->nlo >= 1) alts.push_back(S::cnt(0, s->nlo - 1, body));
        if (s->nhi != kInf) alts.push_back(S::cnt(s->nhi + 1, kInf, body));
        return S::and_({S::type1(JsonType::Arr), S::or_(std::move(alts))});
      }
      case Op::Ref: {
        const std::string& x = s->names[0];
        std::string dual;
        if (x.rfind(prefix_, 0) == 0 && env_.has(x.substr(prefix_.size()))) {
          dual = x.substr(prefix_.size());
        } else {
          dual = prefix_ + x;
        }
        if (!env_.has(dual)) {
          throw NotClosingError("missing dual variable for " + x +
                                " (run not_complete first)");
        }
        return S::ref(dual);
      }
    }
    throw std::logic_error("neg: unhandled operator");
  }

 private:
  const Env& env_;
  std::string prefix_;
};

}  // namespace

Document push_not(const Document& d) {
  Pusher p(d.env, d.dual_prefix.empty() ? "not_" : d.dual_prefix);
  Document out;
  out.dual_prefix = d.dual_prefix;
  out.root = p.push(d.root);
  for (const auto& [name, body] : d.env.defs()) {
    out.env.set(name, p.push(body));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pruning and pipeline

Document prune(const Document& d) {
  std::set<std::string> live = free_vars(d.root);
  std::vector<std::string> work(live.begin(), live.end());
  while (!work.empty()) {
    std::string x = work.back();
    work.pop_back();
    if (!d.env.has(x)) continue;  // closing check is elsewhere
    for (const auto& y : free_vars(d.env.get(x))) {
      if (live.insert(y).second) work.push_back(y);
    }
  }
  Document out;
  out.root = d.root;
  out.dual_prefix = d.dual_prefix;
  for (const auto& [name, body] : d.env.defs()) {
    if (live.count(name)) out.env.set(name, body);
  }
  return out;
}

Document not_eliminate(const Document& d, OneOfMode mode) {
  if (auto cycle = check_guarded(d)) {
    std::string msg = "unguarded recursion:";
    for (const auto& x : *cycle) msg += " " + x;
    throw UnguardedError(msg);
  }
  return prune(push_not(not_complete(simplify(d, mode))));
}

namespace {
bool negation_free_schema(const SchemaPtr& s) {
  if (s->op == Op::Not || s->op == Op::Implies || s->op == Op::IfThenElse ||
      s->op == Op::OneOf) {
    return false;
  }
  for (const auto& p : s->pairs) {
    if (!negation_free_schema(p.schema)) return false;
  }
  if (s->child && !negation_free_schema(s->child)) return false;
  for (const auto& k : s->kids) {
    if (!negation_free_schema(k)) return false;
  }
  return true;
}
}  // namespace

bool is_negation_free(const Document& d) {
  if (!negation_free_schema(d.root)) return false;
  for (const auto& [name, body] : d.env.defs()) {
    if (!negation_free_schema(body)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Standalone encodings

SchemaPtr neg_props_keys(
    const std::vector<std::pair<std::string, SchemaPtr>>& keys) {
  Env empty;
  Pusher pusher(empty, "not_");
  std::vector<SchemaPtr> alts;
  for (const auto& [k, s] : keys) {
    alts.push_back(S::and_({S::req({k}),
                            S::props({{Pattern::literal(k), pusher.neg(s)}},
                                     S::t())}));
  }
  return S::and_({S::type1(JsonType::Obj), S::or_(std::move(alts))});
}

namespace {

// Shared halving-interval builder.  `base(p)` yields the level-0 assertion
// for real position p (1-based); positions beyond n are trivially t.
class HalvingBuilder {
 public:
  HalvingBuilder(uint64_t n, std::string prefix,
                 std::function<SchemaPtr(uint64_t)> base)
      : n_(n), prefix_(std::move(prefix)), base_(std::move(base)) {
    levels_ = ceil_log2_u(n_);
  }

  uint64_t levels() const { return levels_; }
  Env& env() { return env_; }

  // U_{l,p,u}: at most u of the real positions in interval I(l,p) hold.
  SchemaPtr U(uint64_t l, uint64_t p, uint64_t u) {
    uint64_t width = uint64_t(1) << l;
    uint64_t start = (p - 1) * width + 1;
    uint64_t real = start > n_ ? 0 : std::min(width, n_ - start + 1);
    if (u >= real) return S::t();  // out-of-range u reads as t
    std::string name = prefix_ + "_" + std::to_string(l) + "_" +
                       std::to_string(p) + "_" + std::to_string(u);
    if (!env_.has(name)) {
      SchemaPtr body;
      if (l == 0) {
        body = base_(start);
      } else {
        std::vector<SchemaPtr> alts;
        for (uint64_t i = 0; i <= u; ++i) {
          alts.push_back(S::and_({U(l - 1, 2 * p - 1, i),
                                  U(l - 1, 2 * p, u - i)}));
        }
        body = S::or_(std::move(alts));
      }
      env_.set(name, body);
    }
    return S::ref(name);
  }

 private:
  uint64_t n_, levels_;
  std::string prefix_;
  std::function<SchemaPtr(uint64_t)> base_;
  Env env_;
};

}  // namespace

std::pair<SchemaPtr, CountingEnv> counting_env_for_keys(
    const std::vector<std::string>& keys, const std::string& prefix) {
  if (keys.empty()) {
    throw std::invalid_argument("counting_env_for_keys needs >= 1 key");
  }
  uint64_t n = keys.size();
  HalvingBuilder hb(n, prefix, [&](uint64_t p) {
    return keyprops_forbid(keys[size_t(p - 1)]);
  });
  std::vector<SchemaPtr> alts;
  for (uint64_t i = 0; i <= n; ++i) {
    alts.push_back(S::and_({hb.U(hb.levels(), 1, i), S::pro(i + 1, kInf)}));
  }
  SchemaPtr root = S::and_({S::type1(JsonType::Obj), S::or_(std::move(alts))});
  CountingEnv ce;
  ce.env = hb.env();
  ce.n = n;
  ce.levels = hb.levels();
  return {root, ce};
}

std::pair<SchemaPtr, CountingEnv> lower_cont_after(uint64_t n,
                                                   const SchemaPtr& s,
                                                   const std::string& prefix) {
  if (n == 0) return {S::cnt(1, kInf, s), CountingEnv{}};
  HalvingBuilder hb(n, prefix, [&](uint64_t p) {
    return S::item_at(p, S::not_(s));
  });
  std::vector<SchemaPtr> alts;
  for (uint64_t i = 0; i <= n; ++i) {
    alts.push_back(S::and_({hb.U(hb.levels(), 1, i), S::cnt(i + 1, kInf, s)}));
  }
  SchemaPtr root = S::or_(std::move(alts));
  CountingEnv ce;
  ce.env = hb.env();
  ce.n = n;
  ce.levels = hb.levels();
  return {root, ce};
}

SchemaPtr neg_items_common(const std::vector<SchemaPtr>& head,
                           const SchemaPtr& tail, int case_no) {
  auto positional = [&](size_t upto) {
    std::vector<SchemaPtr> alts;
    for (size_t i = 1; i <= upto; ++i) {
      alts.push_back(S::and_({S::item_at(i, S::not_(head[i - 1])),
                              S::ite(i, kInf)}));
    }
    return alts;
  };
  switch (case_no) {
    case 1: {
      if (!head.empty()) {
        throw CaseNotApplicable("case 1 needs an empty head");
      }
      return S::and_({S::type1(JsonType::Arr), S::contains(S::not_(tail))});
    }
    case 2: {
      bool ok = true;
      for (const auto& h : head) {
        ok = ok && (tail->op == Op::True || schema_equal(h, tail));
      }
      if (!ok) {
        throw CaseNotApplicable(
            "case 2 needs every head schema syntactically included in the "
            "tail (identical or tail = t)");
      }
      std::vector<SchemaPtr> alts = positional(head.size());
      alts.push_back(S::contains(S::not_(tail)));
      return S::and_({S::type1(JsonType::Arr), S::or_(std::move(alts))});
    }
    case 3: {
      if (tail->op != Op::False) {
        throw CaseNotApplicable("case 3 needs tail = f");
      }
      std::vector<SchemaPtr> alts = positional(head.size());
      alts.push_back(S::ite(head.size() + 1, kInf));
      return S::and_({S::type1(JsonType::Arr), S::or_(std::move(alts))});
    }
    default:
      throw CaseNotApplicable("unknown case number");
  }
}

SchemaPtr neg_req_contains(const SchemaPtr& node) {
  if (node->op == Op::Req) {
    std::vector<SchemaPtr> alts;
    for (const auto& k : node->names) alts.push_back(keyprops_forbid(k));
    return S::and_({S::type1(JsonType::Obj), S::or_(std::move(alts))});
  }
  if (node->op == Op::Contains) {
    return S::and_({S::type1(JsonType::Arr),
                    S::items(std::vector<SchemaPtr>{},
                             S::not_(node->child))});
  }
  throw std::invalid_argument("neg_req_contains: node must be req or contains");
}

// ---------------------------------------------------------------------------
// Expressibility analysis

namespace {

bool trivial(const SchemaPtr& s) {
  return s->op == Op::True || s->op == Op::False;
}

void analyze_schema(const SchemaPtr& s, const Env& env, std::string path,
                    std::vector<ExprFinding>& out) {
  if (s->op == Op::Not) {
    const SchemaPtr& c = s->child;
    std::string here = path + "/¬" + op_name(c->op);
    switch (c->op) {
      case Op::Props: {
        bool keys_only = true;
        bool nontrivial_sub = false;
        for (const auto& p : c->pairs) {
          keys_only = keys_only && p.pat->is_literal_key();
          nontrivial_sub = nontrivial_sub || !trivial(p.schema);
        }
        bool add_t = !c->child || c->child->op == Op::True;
        bool add_f = c->child && c->child->op == Op::False;
        if (keys_only && add_t) {
          out.push_back({here, ExprClass::KeysTop, ""});
        } else if (keys_only && add_f) {
          out.push_back({here, ExprClass::KeysClosed, ""});
        } else if (!keys_only && nontrivial_sub) {
          out.push_back({here, ExprClass::InherentlyNegative,
                         "props negation theorem (non-key pattern with "
                         "non-trivial subschema)"});
        } else {
          out.push_back({here, ExprClass::Unknown, ""});
        }
        break;
      }
      case Op::Items: {
        bool common = c->kids.empty() ||
                      (c->child && c->child->op == Op::False);
        if (!common && c->child) {
          bool incl = true;
          for (const auto& h : c->kids) {
            incl = incl &&
                   (c->child->op == Op::True || schema_equal(h, c->child));
          }
          common = incl;
        }
        if (common) {
          out.push_back({here, ExprClass::ItemsCommon, ""});
        } else {
          out.push_back({here, ExprClass::InherentlyNegative,
                         "items negation theorem (general tail without the "
                         "counting operator)"});
        }
        break;
      }
      case Op::MulOf:
        out.push_back({here, ExprClass::InherentlyNegative,
                       "mulOf/uniqueItems negation theorem"});
        break;
      case Op::UniqueItems:
        out.push_back({here, ExprClass::InherentlyNegative,
                       "mulOf/uniqueItems negation theorem"});
        break;
      case Op::PNames: {
        bool fin_pos = false, fin_neg = false;
        try {
          PatternPtr p = patt_of_schema(c->child, env);
          fin_pos = is_finite(p->dfa());
          fin_neg = is_finite(jsalg::complement(p->dfa()));
        } catch (const std::exception&) {
          // fall through: unknown
        }
        if (!fin_pos && !fin_neg) {
          out.push_back({here, ExprClass::InherentlyNegative,
                         "pNames corollary (language and complement both "
                         "infinite)"});
        } else {
          out.push_back({here, ExprClass::Unknown, ""});
        }
        break;
      }
      case Op::Cnt: {
        if ((c->nlo >= 2 || c->nhi != kInf) && !trivial(c->child)) {
          out.push_back({here, ExprClass::InherentlyNegative,
                         "bounded counting theorem (contains-after-# note)"});
        } else {
          out.push_back({here, ExprClass::Unknown, ""});
        }
        break;
      }
      default:
        break;
    }
  }
  int i = 0;
  for (const auto& p : s->pairs) {
    analyze_schema(p.schema, env,
                   path + "/" + op_name(s->op) + "[" + std::to_string(i++) +
                       "]",
                   out);
  }
  if (s->child) {
    analyze_schema(s->child, env, path + "/" + op_name(s->op), out);
  }
  i = 0;
  for (const auto& k : s->kids) {
    analyze_schema(k, env,
                   path + "/" + op_name(s->op) + "[" + std::to_string(i++) +
                       "]",
                   out);
  }
}

}  // namespace

ExpressibilityReport analyze_expressibility(const Document& d) {
  ExpressibilityReport report;
  analyze_schema(d.root, d.env, "root", report.findings);
  for (const auto& [name, body] : d.env.defs()) {
    analyze_schema(body, d.env, name, report.findings);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Size-ratio statistics

SizeRatioRecord stats(const Document& before, const Document& after,
                      double elapsed_ms) {
  SizeRatioRecord r;
  r.input_chars = to_text(before).size();
  r.output_chars = to_text(after).size();
  r.ratio = r.input_chars == 0
                ? 0.0
                : double(r.output_chars) / double(r.input_chars);
  r.elapsed_ms = elapsed_ms;
  double kb = double(r.input_chars) / 1024.0;
  r.ms_per_kb = kb == 0.0 ? 0.0 : elapsed_ms / kb;
  return r;
}

}  // namespace jsalg
