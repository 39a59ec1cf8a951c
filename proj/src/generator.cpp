#include "generator.hpp"

#include <algorithm>

namespace jsalg {

InstanceGenerator::InstanceGenerator(uint64_t seed) : rng_(seed) {
  // defaults so generation works with no hints at all
  hint_strings_ = {"", "a", "b", "foo"};
  hint_numbers_ = {Rational(0), Rational(1), Rational(-1), Rational(1, 2)};
  hint_sizes_ = {0, 1, 2, 3};
}

void InstanceGenerator::add_hints(const Document& d) {
  add_hints(d.root);
  for (const auto& [name, body] : d.env.defs()) add_hints(body);
}

namespace {

void add_size_neighbourhood(std::vector<uint64_t>& out, uint64_t v) {
  if (v == kInf) return;
  if (v > 0) out.push_back(v - 1);
  out.push_back(v);
  out.push_back(v + 1);
}

void add_bound_neighbourhood(std::vector<Rational>& out, const NumBound& b) {
  if (b.kind != NumBound::Finite) return;
  out.push_back(b.v - 1);
  out.push_back(b.v);
  out.push_back(b.v + 1);
  out.push_back(b.v + Rational(1, 2));
  out.push_back(b.v - Rational(1, 2));
}

void add_pattern_witnesses(std::vector<std::string>& out,
                           const PatternPtr& p) {
  if (p->is_literal_key()) {
    out.push_back(p->literal_key());
    return;
  }
  try {
    for (auto& w : enumerate_language(p->dfa(), 3)) out.push_back(w);
  } catch (const PatternError&) {
    if (auto w = shortest_witness(p->dfa())) out.push_back(*w);
  }
  // a witness of the complement is interesting too
  if (auto w = shortest_witness(jsalg::complement(p->dfa()))) {
    out.push_back(*w);
  }
}

}  // namespace

void InstanceGenerator::add_hints(const SchemaPtr& s) {
  switch (s->op) {
    case Op::Const:
      hint_values_.push_back(s->value);
      if (s->value->is_str()) hint_strings_.push_back(s->value->as_str());
      if (s->value->is_num()) hint_numbers_.push_back(s->value->as_num());
      break;
    case Op::Enum:
      for (const auto& v : s->values) {
        hint_values_.push_back(v);
        if (v->is_str()) hint_strings_.push_back(v->as_str());
        if (v->is_num()) hint_numbers_.push_back(v->as_num());
      }
      break;
    case Op::Req:
      for (const auto& k : s->names) hint_strings_.push_back(k);
      break;
    case Op::PatternOp:
      add_pattern_witnesses(hint_strings_, s->pattern);
      break;
    case Op::Len:
    case Op::Pro:
    case Op::Ite:
    case Op::Cnt:
      add_size_neighbourhood(hint_sizes_, s->nlo);
      add_size_neighbourhood(hint_sizes_, s->nhi);
      break;
    case Op::Betw:
    case Op::XBetw:
      add_bound_neighbourhood(hint_numbers_, s->qlo);
      add_bound_neighbourhood(hint_numbers_, s->qhi);
      break;
    case Op::MulOf:
    case Op::NotMulOf:
      hint_numbers_.push_back(s->q);
      hint_numbers_.push_back(s->q * 2);
      hint_numbers_.push_back(s->q * 3);
      hint_numbers_.push_back(s->q / 2);
      break;
    case Op::Props:
    case Op::PattReq:
      for (const auto& p : s->pairs) {
        add_pattern_witnesses(hint_strings_, p.pat);
        add_hints(p.schema);
      }
      if (s->child) add_hints(s->child);
      return;
    case Op::ItemAt:
    case Op::ItemsAfter:
    case Op::ContAfter:
      add_size_neighbourhood(hint_sizes_, s->nlo);
      break;
    default:
      break;
  }
  if (s->child) add_hints(s->child);
  for (const auto& k : s->kids) add_hints(k);
}

JsonPtr InstanceGenerator::generate() { return gen_value(0); }

std::string InstanceGenerator::gen_string() {
  std::uniform_int_distribution<size_t> pick(0, hint_strings_.size() - 1);
  if (rng_() % 4 != 0) return hint_strings_[pick(rng_)];
  // short random ASCII string
  size_t n = rng_() % 4;
  std::string out;
  for (size_t i = 0; i < n; ++i) out.push_back(char('a' + rng_() % 26));
  return out;
}

Rational InstanceGenerator::gen_number() {
  std::uniform_int_distribution<size_t> pick(0, hint_numbers_.size() - 1);
  if (rng_() % 4 != 0) return hint_numbers_[pick(rng_)];
  return Rational(int64_t(rng_() % 21) - 10);
}

uint64_t InstanceGenerator::gen_size() {
  std::uniform_int_distribution<size_t> pick(0, hint_sizes_.size() - 1);
  uint64_t v = hint_sizes_[pick(rng_)];
  return std::min<uint64_t>(v, 8);  // keep instances small
}

JsonPtr InstanceGenerator::gen_value(int depth) {
  // bias toward hinted whole values
  if (!hint_values_.empty() && rng_() % 5 == 0) {
    std::uniform_int_distribution<size_t> pick(0, hint_values_.size() - 1);
    return hint_values_[pick(rng_)];
  }
  int max_kind = depth >= 3 ? 3 : 5;  // no containers when deep
  switch (rng_() % (uint64_t(max_kind) + 1)) {
    case 0: return JsonValue::make_null();
    case 1: return JsonValue::make_bool(rng_() % 2 == 0);
    case 2: return JsonValue::make_num(gen_number());
    case 3: return JsonValue::make_str(gen_string());
    case 4: {
      uint64_t n = gen_size();
      JsonValue::Array xs;
      for (uint64_t i = 0; i < n; ++i) xs.push_back(gen_value(depth + 1));
      return JsonValue::make_arr(std::move(xs));
    }
    default: {
      uint64_t n = gen_size();
      JsonValue::Members ms;
      std::set<std::string> used;
      for (uint64_t i = 0; i < n; ++i) {
        std::string k = gen_string();
        if (!used.insert(k).second) continue;
        ms.emplace_back(std::move(k), gen_value(depth + 1));
      }
      return JsonValue::make_obj(std::move(ms));
    }
  }
}

}  // namespace jsalg
