#include "algebra.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace jsalg {

bool le_lower(const NumBound& b, const Rational& x) {
  if (b.kind == NumBound::NegInf) return true;
  if (b.kind == NumBound::PosInf) return false;
  return b.v <= x;
}
bool le_upper(const Rational& x, const NumBound& b) {
  if (b.kind == NumBound::PosInf) return true;
  if (b.kind == NumBound::NegInf) return false;
  return x <= b.v;
}
bool lt_lower(const NumBound& b, const Rational& x) {
  if (b.kind == NumBound::NegInf) return true;
  if (b.kind == NumBound::PosInf) return false;
  return b.v < x;
}
bool lt_upper(const Rational& x, const NumBound& b) {
  if (b.kind == NumBound::PosInf) return true;
  if (b.kind == NumBound::NegInf) return false;
  return x < b.v;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::True: return "t";
    case Op::False: return "f";
    case Op::Type: return "type";
    case Op::Const: return "const";
    case Op::Enum: return "enum";
    case Op::Len: return "len";
    case Op::PatternOp: return "pattern";
    case Op::Betw: return "betw";
    case Op::XBetw: return "xBetw";
    case Op::MulOf: return "mulOf";
    case Op::NotMulOf: return "notMulOf";
    case Op::Props: return "props";
    case Op::Pro: return "pro";
    case Op::Req: return "req";
    case Op::PNames: return "pNames";
    case Op::PattReq: return "pattReq";
    case Op::Items: return "items";
    case Op::ItemAt: return "itemAt";
    case Op::ItemsAfter: return "itemsAfter";
    case Op::Ite: return "ite";
    case Op::Contains: return "contains";
    case Op::ContAfter: return "contAfter";
    case Op::Cnt: return "cnt";
    case Op::UniqueItems: return "uniqueItems";
    case Op::RepeatedItems: return "repeatedItems";
    case Op::Ref: return "ref";
    case Op::Not: return "not";
    case Op::Or: return "or";
    case Op::And: return "and";
    case Op::Implies: return "implies";
    case Op::IfThenElse: return "ifThenElse";
    case Op::OneOf: return "oneOf";
    case Op::Group: return "group";
  }
  return "?";
}

namespace S {

namespace {
std::shared_ptr<Schema> node(Op op) { return std::make_shared<Schema>(op); }
}  // namespace

SchemaPtr t() {
  static const SchemaPtr v = node(Op::True);
  return v;
}
SchemaPtr f() {
  static const SchemaPtr v = node(Op::False);
  return v;
}

SchemaPtr type(std::vector<JsonType> ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  if (ts.empty()) return f();
  if (ts.size() == 6) return t();
  auto n = node(Op::Type);
  n->types = std::move(ts);
  return n;
}
SchemaPtr type1(JsonType tt) { return type({tt}); }

SchemaPtr constant(JsonPtr v) {
  auto n = node(Op::Const);
  n->value = std::move(v);
  return n;
}
SchemaPtr enumeration(std::vector<JsonPtr> vs) {
  auto n = node(Op::Enum);
  n->values = std::move(vs);
  return n;
}
SchemaPtr len(uint64_t lo, uint64_t hi) {
  if (lo > hi) return f();
  if (lo == 0 && hi == kInf) return t();
  auto n = node(Op::Len);
  n->nlo = lo;
  n->nhi = hi;
  return n;
}
SchemaPtr pattern(PatternPtr p) {
  auto n = node(Op::PatternOp);
  n->pattern = std::move(p);
  return n;
}
SchemaPtr betw(NumBound lo, NumBound hi) {
  if (lo.kind == NumBound::PosInf || hi.kind == NumBound::NegInf) return f();
  if (lo.kind == NumBound::Finite && hi.kind == NumBound::Finite &&
      lo.v > hi.v) {
    return f();
  }
  if (lo.kind == NumBound::NegInf && hi.kind == NumBound::PosInf) return t();
  auto n = node(Op::Betw);
  n->qlo = std::move(lo);
  n->qhi = std::move(hi);
  return n;
}
SchemaPtr xbetw(NumBound lo, NumBound hi) {
  if (lo.kind == NumBound::PosInf || hi.kind == NumBound::NegInf) return f();
  if (lo.kind == NumBound::Finite && hi.kind == NumBound::Finite &&
      lo.v >= hi.v) {
    return f();
  }
  if (lo.kind == NumBound::NegInf && hi.kind == NumBound::PosInf) return t();
  auto n = node(Op::XBetw);
  n->qlo = std::move(lo);
  n->qhi = std::move(hi);
  return n;
}
SchemaPtr mulof(Rational q) {
  auto n = node(Op::MulOf);
  n->q = std::move(q);
  return n;
}
SchemaPtr not_mulof(Rational q) {
  auto n = node(Op::NotMulOf);
  n->q = std::move(q);
  return n;
}
SchemaPtr props(std::vector<PropPair> pairs, SchemaPtr additional) {
  auto n = node(Op::Props);
  n->pairs = std::move(pairs);
  n->child = std::move(additional);
  return n;
}
SchemaPtr pro(uint64_t lo, uint64_t hi) {
  if (lo > hi) return f();
  if (lo == 0 && hi == kInf) return t();
  auto n = node(Op::Pro);
  n->nlo = lo;
  n->nhi = hi;
  return n;
}
SchemaPtr req(std::vector<std::string> names) {
  auto n = node(Op::Req);
  n->names = std::move(names);
  return n;
}
SchemaPtr pnames(SchemaPtr s) {
  auto n = node(Op::PNames);
  n->child = std::move(s);
  return n;
}
SchemaPtr pattreq(std::vector<PropPair> pairs) {
  auto n = node(Op::PattReq);
  n->pairs = std::move(pairs);
  return n;
}
SchemaPtr items(std::vector<SchemaPtr> head, SchemaPtr tail) {
  auto n = node(Op::Items);
  n->kids = std::move(head);
  n->child = std::move(tail);
  return n;
}
SchemaPtr item_at(uint64_t i, SchemaPtr s) {
  if (i < 1) throw std::invalid_argument("itemAt index must be >= 1");
  auto n = node(Op::ItemAt);
  n->nlo = i;
  n->child = std::move(s);
  return n;
}
SchemaPtr items_after(uint64_t i, SchemaPtr s) {
  auto n = node(Op::ItemsAfter);
  n->nlo = i;
  n->child = std::move(s);
  return n;
}
SchemaPtr ite(uint64_t lo, uint64_t hi) {
  if (lo > hi) return f();
  if (lo == 0 && hi == kInf) return t();
  auto n = node(Op::Ite);
  n->nlo = lo;
  n->nhi = hi;
  return n;
}
SchemaPtr contains(SchemaPtr s) {
  auto n = node(Op::Contains);
  n->child = std::move(s);
  return n;
}
SchemaPtr cont_after(uint64_t i, SchemaPtr s) {
  auto n = node(Op::ContAfter);
  n->nlo = i;
  n->child = std::move(s);
  return n;
}
SchemaPtr cnt(uint64_t lo, uint64_t hi, SchemaPtr s) {
  if (lo > hi) return f();
  if (lo == 0 && hi == kInf) return t();
  auto n = node(Op::Cnt);
  n->nlo = lo;
  n->nhi = hi;
  n->child = std::move(s);
  return n;
}
SchemaPtr unique_items() {
  static const SchemaPtr v = node(Op::UniqueItems);
  return v;
}
SchemaPtr repeated_items() {
  static const SchemaPtr v = node(Op::RepeatedItems);
  return v;
}
SchemaPtr ref(std::string name) {
  auto n = node(Op::Ref);
  n->names = {std::move(name)};
  return n;
}
SchemaPtr not_(SchemaPtr s) {
  if (s->op == Op::True) return f();
  if (s->op == Op::False) return t();
  if (s->op == Op::Not) return s->child;
  auto n = node(Op::Not);
  n->child = std::move(s);
  return n;
}
SchemaPtr or_(std::vector<SchemaPtr> kids) {
  std::vector<SchemaPtr> out;
  for (auto& k : kids) {
    if (k->op == Op::True) return t();
    if (k->op == Op::False) continue;
    if (k->op == Op::Or) {
      out.insert(out.end(), k->kids.begin(), k->kids.end());
    } else {
      out.push_back(std::move(k));
    }
  }
  if (out.empty()) return f();
  if (out.size() == 1) return out[0];
  auto n = node(Op::Or);
  n->kids = std::move(out);
  return n;
}
SchemaPtr and_(std::vector<SchemaPtr> kids) {
  std::vector<SchemaPtr> out;
  for (auto& k : kids) {
    if (k->op == Op::False) return f();
    if (k->op == Op::True) continue;
    if (k->op == Op::And) {
      out.insert(out.end(), k->kids.begin(), k->kids.end());
    } else {
      out.push_back(std::move(k));
    }
  }
  if (out.empty()) return t();
  if (out.size() == 1) return out[0];
  auto n = node(Op::And);
  n->kids = std::move(out);
  return n;
}
SchemaPtr implies(SchemaPtr a, SchemaPtr b) {
  auto n = node(Op::Implies);
  n->kids = {std::move(a), std::move(b)};
  return n;
}
SchemaPtr if_then_else(SchemaPtr a, SchemaPtr b, SchemaPtr c) {
  auto n = node(Op::IfThenElse);
  n->kids = {std::move(a), std::move(b), std::move(c)};
  return n;
}
SchemaPtr one_of(std::vector<SchemaPtr> kids) {
  if (kids.size() == 1) return kids[0];
  auto n = node(Op::OneOf);
  n->kids = std::move(kids);
  return n;
}
SchemaPtr group(std::vector<SchemaPtr> kids) {
  auto n = node(Op::Group);
  n->kids = std::move(kids);
  return n;
}

}  // namespace S

SchemaPtr Env::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw NotClosingError("undefined variable: " + name);
  }
  return defs_[it->second].second;
}

void Env::set(const std::string& name, SchemaPtr s) {
  auto it = index_.find(name);
  if (it != index_.end()) {
    defs_[it->second].second = std::move(s);
    return;
  }
  index_[name] = defs_.size();
  defs_.emplace_back(name, std::move(s));
}

// ---------------------------------------------------------------------------
// Traversal helpers

namespace {

// Visits every direct child schema; `guarded` says whether the child sits
// under a typed operator (and is therefore a guarded occurrence).
void for_each_child(const SchemaPtr& s,
                    const std::function<void(const SchemaPtr&, bool)>& fn) {
  switch (s->op) {
    case Op::Props:
      for (const auto& p : s->pairs) fn(p.schema, true);
      if (s->child) fn(s->child, true);
      break;
    case Op::PattReq:
      for (const auto& p : s->pairs) fn(p.schema, true);
      break;
    case Op::PNames:
    case Op::ItemAt:
    case Op::ItemsAfter:
    case Op::Contains:
    case Op::ContAfter:
    case Op::Cnt:
      fn(s->child, true);
      break;
    case Op::Items:
      for (const auto& k : s->kids) fn(k, true);
      if (s->child) fn(s->child, true);
      break;
    case Op::Not:
      fn(s->child, false);
      break;
    case Op::Or:
    case Op::And:
    case Op::Implies:
    case Op::IfThenElse:
    case Op::OneOf:
    case Op::Group:
      for (const auto& k : s->kids) fn(k, false);
      break;
    default:
      break;
  }
}

void collect_refs(const SchemaPtr& s, bool only_unguarded,
                  std::set<std::string>& out) {
  if (s->op == Op::Ref) {
    out.insert(s->names[0]);
    return;
  }
  for_each_child(s, [&](const SchemaPtr& c, bool guarded) {
    if (only_unguarded && guarded) return;
    collect_refs(c, only_unguarded, out);
  });
}

}  // namespace

std::set<std::string> free_vars(const SchemaPtr& s) {
  std::set<std::string> out;
  collect_refs(s, false, out);
  return out;
}

std::optional<std::vector<std::string>> check_guarded(const Document& d) {
  // closing check
  std::set<std::string> used = free_vars(d.root);
  for (const auto& [name, body] : d.env.defs()) {
    auto fv = free_vars(body);
    used.insert(fv.begin(), fv.end());
  }
  for (const auto& v : used) {
    if (!d.env.has(v)) throw NotClosingError("undefined variable: " + v);
  }
  // unguarded-dependency graph
  std::map<std::string, std::set<std::string>> dep;
  for (const auto& [name, body] : d.env.defs()) {
    collect_refs(body, true, dep[name]);
  }
  // cycle detection with path reconstruction
  std::map<std::string, int> color;  // 0/absent white, 1 grey, 2 black
  std::vector<std::string> path;
  std::function<std::optional<std::vector<std::string>>(const std::string&)>
      dfs = [&](const std::string& x)
      -> std::optional<std::vector<std::string>> {
    color[x] = 1;
    path.push_back(x);
    for (const auto& y : dep[x]) {
      if (color[y] == 1) {
        // cycle: suffix of path from first occurrence of y, closed with y
        std::vector<std::string> cyc;
        auto it = std::find(path.begin(), path.end(), y);
        cyc.assign(it, path.end());
        cyc.push_back(y);
        return cyc;
      }
      if (color[y] == 0) {
        if (auto c = dfs(y)) return c;
      }
    }
    path.pop_back();
    color[x] = 2;
    return std::nullopt;
  };
  for (const auto& [name, body] : d.env.defs()) {
    if (color[name] == 0) {
      if (auto c = dfs(name)) return c;
    }
  }
  return std::nullopt;
}

namespace {
uint64_t ceil_log2(uint64_t x) {
  // ceil(log2(x)) for x >= 1
  if (x <= 1) return 0;
  return 64 - uint64_t(std::countl_zero(x - 1));
}
}  // namespace

uint64_t size_of(const SchemaPtr& s) {
  uint64_t total = 1;
  switch (s->op) {
    case Op::PatternOp:
      total += s->pattern->source().size();
      break;
    case Op::Const:
      total += serialize(s->value).size();
      break;
    case Op::Enum:
      for (const auto& v : s->values) total += serialize(v).size();
      break;
    case Op::Req:
      total += s->names.size();
      break;
    case Op::Props:
    case Op::PattReq:
      for (const auto& p : s->pairs) total += p.pat->source().size();
      break;
    case Op::ItemAt:
    case Op::ItemsAfter:
    case Op::ContAfter:
      total += ceil_log2(s->nlo + 1);
      break;
    default:
      break;
  }
  for_each_child(s, [&](const SchemaPtr& c, bool) { total += size_of(c); });
  return total;
}

uint64_t size_of(const Document& d) {
  uint64_t total = size_of(d.root);
  for (const auto& [name, body] : d.env.defs()) {
    total += 1 + size_of(body);
  }
  return total;
}

SchemaPtr expand_derived(const SchemaPtr& s) {
  // expand children first
  auto rebuild = [&](const SchemaPtr& n) -> SchemaPtr {
    auto out = std::make_shared<Schema>(*n);
    for (auto& p : out->pairs) p.schema = expand_derived(p.schema);
    if (out->child) out->child = expand_derived(out->child);
    for (auto& k : out->kids) k = expand_derived(k);
    return out;
  };
  switch (s->op) {
    case Op::Enum: {
      std::vector<SchemaPtr> alts;
      for (const auto& v : s->values) alts.push_back(S::constant(v));
      return S::or_(std::move(alts));
    }
    case Op::Implies: {
      auto a = expand_derived(s->kids[0]);
      auto b = expand_derived(s->kids[1]);
      return S::or_({S::not_(a), b});
    }
    case Op::IfThenElse: {
      auto a = expand_derived(s->kids[0]);
      auto b = expand_derived(s->kids[1]);
      auto c = expand_derived(s->kids[2]);
      return S::or_({S::and_({a, b}), S::and_({S::not_(a), c})});
    }
    case Op::OneOf: {
      std::vector<SchemaPtr> kids;
      for (const auto& k : s->kids) kids.push_back(expand_derived(k));
      std::vector<SchemaPtr> alts;
      for (size_t l = 0; l < kids.size(); ++l) {
        std::vector<SchemaPtr> conj;
        for (size_t i = 0; i < kids.size(); ++i) {
          conj.push_back(i == l ? kids[i] : S::not_(kids[i]));
        }
        alts.push_back(S::and_(std::move(conj)));
      }
      return S::or_(std::move(alts));
    }
    case Op::Group: {
      std::vector<SchemaPtr> kids;
      for (const auto& k : s->kids) kids.push_back(expand_derived(k));
      return S::and_(std::move(kids));
    }
    case Op::Not:
      return S::not_(expand_derived(s->child));
    case Op::And: {
      std::vector<SchemaPtr> kids;
      for (const auto& k : s->kids) kids.push_back(expand_derived(k));
      return S::and_(std::move(kids));
    }
    case Op::Or: {
      std::vector<SchemaPtr> kids;
      for (const auto& k : s->kids) kids.push_back(expand_derived(k));
      return S::or_(std::move(kids));
    }
    default:
      return rebuild(s);
  }
}

// ---------------------------------------------------------------------------
// Textual serialization

namespace {

bool plain_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') {
    return false;
  }
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

void emit_name(std::string& out, const std::string& name) {
  if (plain_ident(name)) {
    out += name;
  } else {
    append_json_string(out, name);
  }
}

void emit_nat(std::string& out, uint64_t v) {
  out += v == kInf ? "inf" : std::to_string(v);
}

void emit_num_bound(std::string& out, const NumBound& b) {
  switch (b.kind) {
    case NumBound::NegInf: out += "-inf"; break;
    case NumBound::PosInf: out += "inf"; break;
    case NumBound::Finite: out += rational_to_decimal(b.v); break;
  }
}

void emit(std::string& out, const SchemaPtr& s);

void emit_list(std::string& out, const std::vector<SchemaPtr>& kids) {
  bool first = true;
  for (const auto& k : kids) {
    if (!first) out += ", ";
    first = false;
    emit(out, k);
  }
}

void emit_pairs(std::string& out, const std::vector<PropPair>& pairs) {
  bool first = true;
  for (const auto& p : pairs) {
    if (!first) out += ", ";
    first = false;
    append_json_string(out, p.pat->source());
    out += ": ";
    emit(out, p.schema);
  }
}

void emit(std::string& out, const SchemaPtr& s) {
  switch (s->op) {
    case Op::True: out += "t"; return;
    case Op::False: out += "f"; return;
    case Op::UniqueItems: out += "uniqueItems"; return;
    case Op::RepeatedItems: out += "repeatedItems"; return;
    case Op::Type: {
      out += "type(";
      bool first = true;
      for (JsonType tt : s->types) {
        if (!first) out += ", ";
        first = false;
        out += json_type_name(tt);
      }
      out += ")";
      return;
    }
    case Op::Const:
      out += "const(";
      out += serialize(s->value);
      out += ")";
      return;
    case Op::Enum: {
      out += "enum(";
      bool first = true;
      for (const auto& v : s->values) {
        if (!first) out += ", ";
        first = false;
        out += serialize(v);
      }
      out += ")";
      return;
    }
    case Op::Len:
    case Op::Pro:
    case Op::Ite:
      out += op_name(s->op);
      out += "(";
      emit_nat(out, s->nlo);
      out += ", ";
      emit_nat(out, s->nhi);
      out += ")";
      return;
    case Op::PatternOp:
      out += "pattern(";
      append_json_string(out, s->pattern->source());
      out += ")";
      return;
    case Op::Betw:
    case Op::XBetw:
      out += op_name(s->op);
      out += "(";
      emit_num_bound(out, s->qlo);
      out += ", ";
      emit_num_bound(out, s->qhi);
      out += ")";
      return;
    case Op::MulOf:
    case Op::NotMulOf:
      out += op_name(s->op);
      out += "(";
      out += rational_to_decimal(s->q);
      out += ")";
      return;
    case Op::Props:
      out += "props(";
      emit_pairs(out, s->pairs);
      out += "; ";
      emit(out, s->child);
      out += ")";
      return;
    case Op::Req: {
      out += "req(";
      bool first = true;
      for (const auto& k : s->names) {
        if (!first) out += ", ";
        first = false;
        append_json_string(out, k);
      }
      out += ")";
      return;
    }
    case Op::PNames:
      out += "pNames(";
      emit(out, s->child);
      out += ")";
      return;
    case Op::PattReq:
      out += "pattReq(";
      emit_pairs(out, s->pairs);
      out += ")";
      return;
    case Op::Items:
      out += "items(";
      emit_list(out, s->kids);
      out += "; ";
      emit(out, s->child);
      out += ")";
      return;
    case Op::ItemAt:
    case Op::ItemsAfter:
    case Op::ContAfter:
      out += op_name(s->op);
      out += "(";
      emit_nat(out, s->nlo);
      out += ", ";
      emit(out, s->child);
      out += ")";
      return;
    case Op::Contains:
      out += "contains(";
      emit(out, s->child);
      out += ")";
      return;
    case Op::Cnt:
      out += "cnt(";
      emit_nat(out, s->nlo);
      out += ", ";
      emit_nat(out, s->nhi);
      out += ", ";
      emit(out, s->child);
      out += ")";
      return;
    case Op::Ref:
      out += "ref(";
      emit_name(out, s->names[0]);
      out += ")";
      return;
    case Op::Not:
      out += "¬";
      emit(out, s->child);
      return;
    case Op::And:
    case Op::Or: {
      const char* sep = s->op == Op::And ? " ∧ " : " ∨ ";
      out += "(";
      bool first = true;
      for (const auto& k : s->kids) {
        if (!first) out += sep;
        first = false;
        emit(out, k);
      }
      out += ")";
      return;
    }
    case Op::Implies:
      out += "(";
      emit(out, s->kids[0]);
      out += " ⇒ ";
      emit(out, s->kids[1]);
      out += ")";
      return;
    case Op::IfThenElse:
      out += "ifThenElse(";
      emit_list(out, s->kids);
      out += ")";
      return;
    case Op::OneOf:
      out += "oneOf(";
      emit_list(out, s->kids);
      out += ")";
      return;
    case Op::Group:
      out += "group(";
      emit_list(out, s->kids);
      out += ")";
      return;
  }
}

}  // namespace

std::string to_text(const SchemaPtr& s) {
  std::string out;
  emit(out, s);
  return out;
}

std::string to_text(const Document& d) {
  std::string out = to_text(d.root);
  if (d.env.size() > 0) {
    out += " defs(\n";
    bool first = true;
    for (const auto& [name, body] : d.env.defs()) {
      if (!first) out += ",\n";
      first = false;
      out += "  ";
      emit_name(out, name);
      out += " : ";
      emit(out, body);
    }
    out += "\n)";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Textual parser

namespace {

class TextParser {
 public:
  explicit TextParser(const std::string& text) : s_(text) {}

  Document parse_document() {
    Document d;
    d.root = parse_schema();
    skip_ws();
    if (match_word("defs")) {
      expect('(');
      skip_ws();
      if (!match(')')) {
        for (;;) {
          std::string name = parse_name();
          skip_ws();
          expect(':');
          SchemaPtr body = parse_schema();
          d.env.set(name, std::move(body));
          skip_ws();
          if (match(')')) break;
          expect(',');
        }
      }
    }
    skip_ws();
    if (pos_ != s_.size()) err("trailing input");
    return d;
  }

  SchemaPtr parse_schema_only() {
    SchemaPtr s = parse_schema();
    skip_ws();
    if (pos_ != s_.size()) err("trailing input");
    return s;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void err(const std::string& msg) {
    throw AlgebraParseError("algebra text error at byte " +
                            std::to_string(pos_) + ": " + msg);
  }
  void skip_ws() {
    while (pos_ < s_.size() &&
           (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
            s_[pos_] == '\r')) {
      ++pos_;
    }
  }
  bool match(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }
  void expect(char c) {
    if (!match(c)) err(std::string("expected '") + c + "'");
  }
  bool match_str(const char* w) {
    skip_ws();
    size_t n = std::string(w).size();
    if (s_.compare(pos_, n, w) == 0) { pos_ += n; return true; }
    return false;
  }
  // identifier-boundary-aware word match
  bool match_word(const char* w) {
    skip_ws();
    size_t n = std::string(w).size();
    if (s_.compare(pos_, n, w) != 0) return false;
    if (pos_ + n < s_.size()) {
      char c = s_[pos_ + n];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        return false;
      }
    }
    pos_ += n;
    return true;
  }

  std::string parse_ident() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) err("expected identifier");
    return s_.substr(start, pos_ - start);
  }

  std::string parse_quoted() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '"') err("expected string");
    size_t start = pos_;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') ++pos_;
      ++pos_;
    }
    if (pos_ >= s_.size()) err("unterminated string");
    ++pos_;
    JsonPtr v = parse_json(s_.substr(start, pos_ - start));
    return v->as_str();
  }

  std::string parse_name() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '"') return parse_quoted();
    return parse_ident();
  }

  // Scans one JSON value (balanced braces/brackets, strings respected).
  JsonPtr parse_json_value() {
    skip_ws();
    size_t start = pos_;
    int depth = 0;
    bool in_str = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (in_str) {
        if (c == '\\') ++pos_;
        else if (c == '"') in_str = false;
      } else if (c == '"') {
        in_str = true;
      } else if (c == '{' || c == '[') {
        ++depth;
      } else if (c == '}' || c == ']') {
        if (depth == 0) break;
        --depth;
      } else if (depth == 0 && (c == ',' || c == ';' || c == ')')) {
        break;
      }
      ++pos_;
    }
    if (pos_ == start) err("expected JSON value");
    std::string chunk = s_.substr(start, pos_ - start);
    try {
      return parse_json(chunk);
    } catch (const JsonParseError& e) {
      err(std::string("bad JSON value: ") + e.what());
    }
  }

  uint64_t parse_nat() {
    skip_ws();
    if (match_word("inf")) return kInf;
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    if (pos_ == start) err("expected natural number or inf");
    return std::stoull(s_.substr(start, pos_ - start));
  }

  NumBound parse_num_bound() {
    skip_ws();
    if (match_str("-inf")) return NumBound::neg_inf();
    if (match_word("inf")) return NumBound::pos_inf();
    return NumBound::of(parse_rational());
  }

  Rational parse_rational() {
    skip_ws();
    size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E' ||
            ((s_[pos_] == '-' || s_[pos_] == '+') &&
             (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    if (pos_ == start) err("expected number");
    try {
      return rational_from_decimal(s_.substr(start, pos_ - start));
    } catch (const std::invalid_argument& e) {
      err(e.what());
    }
  }

  std::vector<PropPair> parse_pairs(char terminator) {
    std::vector<PropPair> pairs;
    skip_ws();
    while (pos_ < s_.size() && s_[pos_] != terminator) {
      std::string src = parse_quoted();
      expect(':');
      SchemaPtr sub = parse_schema();
      pairs.push_back({Pattern::parse(src), std::move(sub)});
      skip_ws();
      if (!match(',')) break;
    }
    return pairs;
  }

  SchemaPtr parse_schema() {
    skip_ws();
    if (pos_ >= s_.size()) err("unexpected end of input");
    // negation glyph (UTF-8 C2 AC)
    if (s_.compare(pos_, 2, "¬") == 0) {
      pos_ += 2;
      return S::not_(parse_schema());
    }
    if (s_[pos_] == '(') {
      ++pos_;
      return parse_infix();
    }
    std::string word = parse_ident();
    if (word == "t") return S::t();
    if (word == "f") return S::f();
    if (word == "uniqueItems") return S::unique_items();
    if (word == "repeatedItems") return S::repeated_items();
    expect('(');
    SchemaPtr out = parse_operator(word);
    expect(')');
    return out;
  }

  SchemaPtr parse_operator(const std::string& word) {
    if (word == "type") {
      std::vector<JsonType> ts;
      for (;;) {
        std::string tn = parse_ident();
        bool found = false;
        for (int i = 0; i < 6; ++i) {
          if (tn == json_type_name(JsonType(i))) {
            ts.push_back(JsonType(i));
            found = true;
          }
        }
        if (!found) err("unknown type name: " + tn);
        if (!match(',')) break;
      }
      return S::type(std::move(ts));
    }
    if (word == "const") return S::constant(parse_json_value());
    if (word == "enum") {
      std::vector<JsonPtr> vs{parse_json_value()};
      while (match(',')) vs.push_back(parse_json_value());
      return S::enumeration(std::move(vs));
    }
    if (word == "len" || word == "pro" || word == "ite") {
      uint64_t lo = parse_nat();
      expect(',');
      uint64_t hi = parse_nat();
      if (word == "len") return S::len(lo, hi);
      if (word == "pro") return S::pro(lo, hi);
      return S::ite(lo, hi);
    }
    if (word == "pattern") return S::pattern(Pattern::parse(parse_quoted()));
    if (word == "betw" || word == "xBetw") {
      NumBound lo = parse_num_bound();
      expect(',');
      NumBound hi = parse_num_bound();
      return word == "betw" ? S::betw(lo, hi) : S::xbetw(lo, hi);
    }
    if (word == "mulOf") return S::mulof(parse_rational());
    if (word == "notMulOf") return S::not_mulof(parse_rational());
    if (word == "props") {
      auto pairs = parse_pairs(';');
      expect(';');
      SchemaPtr add = parse_schema();
      return S::props(std::move(pairs), std::move(add));
    }
    if (word == "req") {
      std::vector<std::string> names;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '"') {
        names.push_back(parse_quoted());
        while (match(',')) names.push_back(parse_quoted());
      }
      return S::req(std::move(names));
    }
    if (word == "pNames") return S::pnames(parse_schema());
    if (word == "pattReq") return S::pattreq(parse_pairs(')'));
    if (word == "items") {
      std::vector<SchemaPtr> head;
      skip_ws();
      while (pos_ < s_.size() && s_[pos_] != ';') {
        head.push_back(parse_schema());
        skip_ws();
        if (!match(',')) break;
      }
      expect(';');
      SchemaPtr tail = parse_schema();
      return S::items(std::move(head), std::move(tail));
    }
    if (word == "itemAt" || word == "itemsAfter" || word == "contAfter") {
      uint64_t n = parse_nat();
      expect(',');
      SchemaPtr sub = parse_schema();
      if (word == "itemAt") return S::item_at(n, std::move(sub));
      if (word == "itemsAfter") return S::items_after(n, std::move(sub));
      return S::cont_after(n, std::move(sub));
    }
    if (word == "contains") return S::contains(parse_schema());
    if (word == "cnt") {
      uint64_t lo = parse_nat();
      expect(',');
      uint64_t hi = parse_nat();
      expect(',');
      return S::cnt(lo, hi, parse_schema());
    }
    if (word == "ref") return S::ref(parse_name());
    if (word == "not") return S::not_(parse_schema());
    if (word == "and" || word == "or" || word == "oneOf" || word == "group") {
      std::vector<SchemaPtr> kids{parse_schema()};
      while (match(',')) kids.push_back(parse_schema());
      if (word == "and") return S::and_(std::move(kids));
      if (word == "or") return S::or_(std::move(kids));
      if (word == "oneOf") return S::one_of(std::move(kids));
      return S::group(std::move(kids));
    }
    if (word == "implies") {
      SchemaPtr a = parse_schema();
      expect(',');
      SchemaPtr b = parse_schema();
      return S::implies(std::move(a), std::move(b));
    }
    if (word == "ifThenElse") {
      SchemaPtr a = parse_schema();
      expect(',');
      SchemaPtr b = parse_schema();
      expect(',');
      SchemaPtr c = parse_schema();
      return S::if_then_else(std::move(a), std::move(b), std::move(c));
    }
    err("unknown operator: " + word);
  }

  // after '(' has been consumed: S (glyph S)* ')'
  SchemaPtr parse_infix() {
    std::vector<SchemaPtr> kids{parse_schema()};
    enum { None, AndG, OrG, ImpG } kind = None;
    for (;;) {
      skip_ws();
      if (match(')')) break;
      int op;
      if (match_str("∧")) op = AndG;
      else if (match_str("∨")) op = OrG;
      else if (match_str("⇒")) op = ImpG;
      else err("expected connective or ')'");
      if (kind == None) kind = decltype(kind)(op);
      else if (kind != op) err("mixed connectives need parentheses");
      kids.push_back(parse_schema());
      if (kind == ImpG && kids.size() > 2) err("chained ⇒");
    }
    if (kind == None) return kids[0];
    if (kind == AndG) return S::and_(std::move(kids));
    if (kind == OrG) return S::or_(std::move(kids));
    return S::implies(kids[0], kids[1]);
  }
};

}  // namespace

Document document_from_text(const std::string& text) {
  return TextParser(text).parse_document();
}
SchemaPtr schema_from_text(const std::string& text) {
  return TextParser(text).parse_schema_only();
}

// ---------------------------------------------------------------------------
// PattOfS

namespace {

PatternPtr patt_of(const SchemaPtr& s, const Env& e,
                   std::set<std::string>& expanding) {
  switch (s->op) {
    case Op::True: return Pattern::any();
    case Op::False: return Pattern::none();
    case Op::Type:
      for (JsonType tt : s->types) {
        if (tt == JsonType::Str) return Pattern::any();
      }
      return Pattern::none();
    case Op::Const:
      if (s->value->is_str()) return Pattern::literal(s->value->as_str());
      return Pattern::none();
    case Op::Enum: {
      PatternPtr acc = Pattern::none();
      for (const auto& v : s->values) {
        if (v->is_str()) acc = Pattern::alt(acc, Pattern::literal(v->as_str()));
      }
      return acc;
    }
    case Op::Len: {
      // strings of length nlo..nhi: ^[^]{lo,hi}$
      std::string src = "^[^]{" + std::to_string(s->nlo);
      src += s->nhi == kInf ? "," : "," + std::to_string(s->nhi);
      src += "}$";
      return Pattern::parse(src);
    }
    case Op::PatternOp: return s->pattern;
    case Op::And: {
      PatternPtr acc = Pattern::any();
      for (const auto& k : s->kids) {
        acc = Pattern::intersect(acc, patt_of(k, e, expanding));
      }
      return acc;
    }
    case Op::Or: {
      PatternPtr acc = Pattern::none();
      for (const auto& k : s->kids) {
        acc = Pattern::alt(acc, patt_of(k, e, expanding));
      }
      return acc;
    }
    case Op::Not:
      return Pattern::complement(patt_of(s->child, e, expanding));
    case Op::Implies:
    case Op::IfThenElse:
    case Op::OneOf:
    case Op::Group:
      return patt_of(expand_derived(s), e, expanding);
    case Op::Ref: {
      const std::string& x = s->names[0];
      if (expanding.count(x)) {
        throw UnguardedError("unguarded recursive variable in PattOfS: " + x);
      }
      expanding.insert(x);
      PatternPtr out = patt_of(e.get(x), e, expanding);
      expanding.erase(x);
      return out;
    }
    default:
      // Implicative typed operators of a non-Str type are satisfied by
      // every string.
      return Pattern::any();
  }
}

}  // namespace

PatternPtr patt_of_schema(const SchemaPtr& s, const Env& e) {
  std::set<std::string> expanding;
  return patt_of(s, e, expanding);
}

}  // namespace jsalg
