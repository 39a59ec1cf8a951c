#include "semantics.hpp"

#include "generator.hpp"

#include <set>

namespace jsalg {

namespace {

struct EvalCtx {
  const Env& env;
  // dynamic guard: (variable, instance node) pairs currently being unfolded
  std::set<std::pair<std::string, const JsonValue*>> guard;
};

bool eval(const JsonPtr& j, const SchemaPtr& s, EvalCtx& ctx);

bool eval_pairs_member(const std::string& key, const JsonPtr& val,
                       const SchemaPtr& s, EvalCtx& ctx) {
  // props clause: value checked against every matching pattern; against
  // `additional` exactly when the key matches none.
  bool any_match = false;
  for (const auto& p : s->pairs) {
    if (p.pat->matches(key)) {
      any_match = true;
      if (!eval(val, p.schema, ctx)) return false;
    }
  }
  if (!any_match && s->child) {
    if (!eval(val, s->child, ctx)) return false;
  }
  return true;
}

uint64_t str_length(const std::string& s) { return decode_utf8(s).size(); }

bool is_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1;
}

bool eval(const JsonPtr& j, const SchemaPtr& s, EvalCtx& ctx) {
  switch (s->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Type: {
      JsonType t = j->type();
      for (JsonType tt : s->types) {
        if (tt == t) return true;
      }
      return false;
    }
    case Op::Const: return deep_equal(j, s->value);
    case Op::Enum: {
      for (const auto& v : s->values) {
        if (deep_equal(j, v)) return true;
      }
      return false;
    }
    case Op::Len: {
      if (!j->is_str()) return true;
      uint64_t n = str_length(j->as_str());
      return s->nlo <= n && n <= s->nhi;
    }
    case Op::PatternOp:
      if (!j->is_str()) return true;
      return s->pattern->matches(j->as_str());
    case Op::Betw:
      if (!j->is_num()) return true;
      return le_lower(s->qlo, j->as_num()) && le_upper(j->as_num(), s->qhi);
    case Op::XBetw:
      if (!j->is_num()) return true;
      return lt_lower(s->qlo, j->as_num()) && lt_upper(j->as_num(), s->qhi);
    case Op::MulOf:
      if (!j->is_num()) return true;
      return is_integer(j->as_num() / s->q);
    case Op::NotMulOf:
      if (!j->is_num()) return true;
      return !is_integer(j->as_num() / s->q);
    case Op::Props: {
      if (!j->is_obj()) return true;
      for (const auto& [k, v] : j->as_obj()) {
        if (!eval_pairs_member(k, v, s, ctx)) return false;
      }
      return true;
    }
    case Op::Pro: {
      if (!j->is_obj()) return true;
      uint64_t n = j->as_obj().size();
      return s->nlo <= n && n <= s->nhi;
    }
    case Op::Req: {
      if (!j->is_obj()) return true;
      for (const auto& k : s->names) {
        if (!j->get(k)) return false;
      }
      return true;
    }
    case Op::PNames: {
      if (!j->is_obj()) return true;
      for (const auto& [k, v] : j->as_obj()) {
        if (!eval(JsonValue::make_str(k), s->child, ctx)) return false;
      }
      return true;
    }
    case Op::PattReq: {
      if (!j->is_obj()) return true;
      for (const auto& p : s->pairs) {
        bool found = false;
        for (const auto& [k, v] : j->as_obj()) {
          if (p.pat->matches(k) && eval(v, p.schema, ctx)) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
      return true;
    }
    case Op::Items: {
      if (!j->is_arr()) return true;
      const auto& xs = j->as_arr();
      for (size_t i = 0; i < xs.size(); ++i) {
        const SchemaPtr& sub =
            i < s->kids.size() ? s->kids[i] : s->child;
        if (!eval(xs[i], sub, ctx)) return false;
      }
      return true;
    }
    case Op::ItemAt: {
      if (!j->is_arr()) return true;
      const auto& xs = j->as_arr();
      if (xs.size() < s->nlo) return true;  // vacuous on shorter arrays
      return eval(xs[size_t(s->nlo - 1)], s->child, ctx);
    }
    case Op::ItemsAfter: {
      if (!j->is_arr()) return true;
      const auto& xs = j->as_arr();
      for (size_t i = size_t(s->nlo); i < xs.size(); ++i) {
        if (!eval(xs[i], s->child, ctx)) return false;
      }
      return true;
    }
    case Op::Ite: {
      if (!j->is_arr()) return true;
      uint64_t n = j->as_arr().size();
      return s->nlo <= n && n <= s->nhi;
    }
    case Op::Contains: {
      if (!j->is_arr()) return true;
      for (const auto& x : j->as_arr()) {
        if (eval(x, s->child, ctx)) return true;
      }
      return false;
    }
    case Op::ContAfter: {
      if (!j->is_arr()) return true;
      const auto& xs = j->as_arr();
      for (size_t i = size_t(s->nlo); i < xs.size(); ++i) {
        if (eval(xs[i], s->child, ctx)) return true;
      }
      return false;
    }
    case Op::Cnt: {
      if (!j->is_arr()) return true;
      uint64_t n = 0;
      for (const auto& x : j->as_arr()) {
        if (eval(x, s->child, ctx)) ++n;
      }
      return s->nlo <= n && n <= s->nhi;
    }
    case Op::UniqueItems: {
      if (!j->is_arr()) return true;
      const auto& xs = j->as_arr();
      for (size_t a = 0; a < xs.size(); ++a) {
        for (size_t b = a + 1; b < xs.size(); ++b) {
          if (deep_equal(*xs[a], *xs[b])) return false;
        }
      }
      return true;
    }
    case Op::RepeatedItems: {
      if (!j->is_arr()) return true;
      const auto& xs = j->as_arr();
      for (size_t a = 0; a < xs.size(); ++a) {
        for (size_t b = a + 1; b < xs.size(); ++b) {
          if (deep_equal(*xs[a], *xs[b])) return true;
        }
      }
      return false;
    }
    case Op::Ref: {
      auto key = std::make_pair(s->names[0], j.get());
      if (!ctx.guard.insert(key).second) {
        throw UnguardedError("unguarded unfolding of variable " + s->names[0]);
      }
      bool out = eval(j, ctx.env.get(s->names[0]), ctx);
      ctx.guard.erase(key);
      return out;
    }
    case Op::Not: return !eval(j, s->child, ctx);
    case Op::Or: {
      for (const auto& k : s->kids) {
        if (eval(j, k, ctx)) return true;
      }
      return false;
    }
    case Op::And:
    case Op::Group: {
      for (const auto& k : s->kids) {
        if (!eval(j, k, ctx)) return false;
      }
      return true;
    }
    case Op::Implies:
      return !eval(j, s->kids[0], ctx) || eval(j, s->kids[1], ctx);
    case Op::IfThenElse:
      return eval(j, s->kids[0], ctx) ? eval(j, s->kids[1], ctx)
                                      : eval(j, s->kids[2], ctx);
    case Op::OneOf: {
      size_t n = 0;
      for (const auto& k : s->kids) {
        if (eval(j, k, ctx)) ++n;
      }
      return n == 1;
    }
  }
  return false;
}

}  // namespace

bool eval_schema(const JsonPtr& j, const SchemaPtr& s, const Env& env) {
  EvalCtx ctx{env, {}};
  return eval(j, s, ctx);
}

ValidationOutcome validate(const JsonPtr& j, const Document& d) {
  if (auto cycle = check_guarded(d)) {
    std::string msg = "unguarded recursion:";
    for (const auto& x : *cycle) msg += " " + x;
    throw UnguardedError(msg);
  }
  ValidationOutcome out;
  out.valid = eval_schema(j, d.root, d.env);
  if (!out.valid) {
    out.trace.emplace_back("", op_name(d.root->op));
  }
  return out;
}

bool valid(const JsonPtr& j, const Document& d) {
  return eval_schema(j, d.root, d.env);
}

EquivVerdict equiv_sample(const Document& d1, const Document& d2,
                          InstanceGenerator& gen, size_t n) {
  gen.add_hints(d1);
  gen.add_hints(d2);
  for (size_t i = 0; i < n; ++i) {
    JsonPtr j = gen.generate();
    bool a = eval_schema(j, d1.root, d1.env);
    bool b = eval_schema(j, d2.root, d2.env);
    if (a != b) {
      return EquivVerdict{false, j, a};
    }
  }
  return EquivVerdict{};
}

}  // namespace jsalg
