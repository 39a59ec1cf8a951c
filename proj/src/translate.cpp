#include "translate.hpp"

#include "notelim.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace jsalg {

namespace {

// --- small JSON builders ---------------------------------------------------

JsonPtr jstr(const std::string& s) { return JsonValue::make_str(s); }
JsonPtr jnum(uint64_t n) { return JsonValue::make_num(Rational(n)); }
JsonPtr jnum(const Rational& q) { return JsonValue::make_num(q); }
JsonPtr jbool(bool b) { return JsonValue::make_bool(b); }
JsonPtr jobj(JsonValue::Members ms) {
  return JsonValue::make_obj(std::move(ms));
}
JsonPtr jarr(JsonValue::Array xs) { return JsonValue::make_arr(std::move(xs)); }

bool as_uint(const JsonPtr& v, uint64_t& out) {
  if (!v->is_num()) return false;
  const Rational& q = v->as_num();
  if (boost::multiprecision::denominator(q) != 1 || q < 0) return false;
  BigInt n = boost::multiprecision::numerator(q);
  if (n > std::numeric_limits<uint64_t>::max()) return false;
  out = uint64_t(n);
  return true;
}

// --- JSON pointers ---------------------------------------------------------

std::string unescape_pointer_segment(const std::string& seg) {
  std::string out;
  for (size_t i = 0; i < seg.size(); ++i) {
    if (seg[i] == '~' && i + 1 < seg.size()) {
      if (seg[i + 1] == '0') { out += '~'; ++i; continue; }
      if (seg[i + 1] == '1') { out += '/'; ++i; continue; }
    }
    out += seg[i];
  }
  return out;
}

std::string escape_pointer_segment(const std::string& seg) {
  std::string out;
  for (char c : seg) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::vector<std::string> pointer_segments(const std::string& path) {
  // path starts with "#/"
  std::vector<std::string> segs;
  size_t i = 2;
  while (i <= path.size()) {
    size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    segs.push_back(unescape_pointer_segment(path.substr(i, j - i)));
    i = j + 1;
  }
  return segs;
}

JsonPtr resolve_pointer(const JsonPtr& root, const std::string& path) {
  if (path == "#") return root;
  if (path.rfind("#/", 0) != 0) {
    throw UnresolvedRefError("external or non-fragment $ref not supported: " +
                             path);
  }
  JsonPtr cur = root;
  for (const auto& seg : pointer_segments(path)) {
    if (cur->is_obj()) {
      JsonPtr next = cur->get(seg);
      if (!next) throw UnresolvedRefError("dangling $ref: " + path);
      cur = next;
    } else if (cur->is_arr()) {
      uint64_t idx = 0;
      JsonPtr segnum;
      try {
        segnum = parse_json(seg);
      } catch (const JsonParseError&) {
        throw UnresolvedRefError("dangling $ref: " + path);
      }
      if (!as_uint(segnum, idx) || idx >= cur->as_arr().size()) {
        throw UnresolvedRefError("dangling $ref: " + path);
      }
      cur = cur->as_arr()[size_t(idx)];
    } else {
      throw UnresolvedRefError("dangling $ref: " + path);
    }
  }
  return cur;
}

bool is_normal_ref(const std::string& path) {
  if (path == "#") return true;
  const std::string pre = "#/definitions/";
  return path.rfind(pre, 0) == 0 &&
         path.find('/', pre.size()) == std::string::npos;
}

std::string flat_name(const std::string& path) {
  // "#/a/b" -> "a_b"
  std::string out;
  for (const auto& seg : pointer_segments(path)) {
    if (!out.empty()) out += "_";
    out += seg;
  }
  return out;
}

void collect_refs(const JsonPtr& v, std::set<std::string>& out) {
  if (v->is_obj()) {
    for (const auto& [k, x] : v->as_obj()) {
      if (k == "$ref" && x->is_str()) out.insert(x->as_str());
      collect_refs(x, out);
    }
  } else if (v->is_arr()) {
    for (const auto& x : v->as_arr()) collect_refs(x, out);
  }
}

JsonPtr rewrite_refs(const JsonPtr& v,
                     const std::map<std::string, std::string>& names) {
  if (v->is_obj()) {
    JsonValue::Members ms;
    for (const auto& [k, x] : v->as_obj()) {
      if (k == "$ref" && x->is_str()) {
        auto it = names.find(x->as_str());
        if (it != names.end()) {
          ms.emplace_back(k, jstr("#/definitions/" +
                                  escape_pointer_segment(it->second)));
          continue;
        }
      }
      ms.emplace_back(k, rewrite_refs(x, names));
    }
    return jobj(std::move(ms));
  }
  if (v->is_arr()) {
    JsonValue::Array xs;
    for (const auto& x : v->as_arr()) xs.push_back(rewrite_refs(x, names));
    return jarr(std::move(xs));
  }
  return v;
}

}  // namespace

JsonPtr normalize_refs(const JsonPtr& raw) {
  if (!raw->is_obj()) return raw;
  std::set<std::string> all;
  collect_refs(raw, all);
  std::map<std::string, JsonPtr> copies;  // non-normal path -> target
  std::vector<std::string> work;
  for (const auto& p : all) {
    if (!is_normal_ref(p)) work.push_back(p);
  }
  while (!work.empty()) {
    std::string p = work.back();
    work.pop_back();
    if (copies.count(p)) continue;
    JsonPtr target = resolve_pointer(raw, p);
    copies[p] = target;
    std::set<std::string> nested;
    collect_refs(target, nested);
    for (const auto& q : nested) {
      if (!is_normal_ref(q) && !copies.count(q)) work.push_back(q);
    }
  }
  // validate the normal refs too, so danglers fail here rather than later
  for (const auto& p : all) {
    if (is_normal_ref(p)) resolve_pointer(raw, p);
  }
  if (copies.empty()) return raw;

  std::set<std::string> used;
  if (JsonPtr defs = raw->get("definitions"); defs && defs->is_obj()) {
    for (const auto& [k, x] : defs->as_obj()) used.insert(k);
  }
  std::map<std::string, std::string> names;
  for (const auto& [p, target] : copies) {
    std::string base = flat_name(p);
    std::string name = base;
    for (int k = 2; used.count(name); ++k) {
      name = base + "_" + std::to_string(k);
    }
    used.insert(name);
    names[p] = name;
  }

  JsonPtr body = rewrite_refs(raw, names);
  JsonValue::Members defs_ms;
  if (JsonPtr defs = body->get("definitions"); defs && defs->is_obj()) {
    defs_ms = defs->as_obj();
  }
  for (const auto& [p, target] : copies) {
    defs_ms.emplace_back(names.at(p), rewrite_refs(target, names));
  }
  JsonValue::Members out_ms;
  for (const auto& [k, x] : body->as_obj()) {
    if (k != "definitions") out_ms.emplace_back(k, x);
  }
  out_ms.emplace_back("definitions", jobj(std::move(defs_ms)));
  return jobj(std::move(out_ms));
}

// ---------------------------------------------------------------------------
// JSON Schema -> algebra

namespace {

const std::set<std::string> kAnnotations = {
    "$schema", "$id", "id", "$comment", "title", "description", "default",
    "examples", "readOnly", "writeOnly", "format", "contentMediaType",
    "contentEncoding"};

class FromJson {
 public:
  FromJson(DraftDialect dialect, std::string root_var)
      : dialect_(dialect), root_var_(std::move(root_var)) {}

  std::vector<std::string> warnings;
  bool root_ref_used = false;

  SchemaPtr tr(const JsonPtr& s) {
    if (s->is_bool()) return s->as_bool() ? S::t() : S::f();
    if (!s->is_obj()) {
      throw InvalidSchemaError("a schema must be an object or a boolean, got " +
                               serialize(s));
    }
    return tr_members(s->as_obj(), /*at_root=*/false);
  }

  SchemaPtr tr_members(const JsonValue::Members& ms, bool at_root) {
    // $ref short-circuits its siblings (draft-06 reference semantics)
    if (JsonPtr r = member(ms, "$ref")) {
      if (!r->is_str()) throw InvalidSchemaError("$ref must be a string");
      for (const auto& [k, v] : ms) {
        if (k != "$ref" && !kAnnotations.count(k) &&
            !(at_root && k == "definitions")) {
          warn("keywords beside $ref are ignored: " + k);
          break;
        }
      }
      return tr_ref(r->as_str());
    }

    std::vector<SchemaPtr> conj;
    for (const auto& [key, v] : ms) {
      if (SchemaPtr s = tr_keyword(ms, key, v, at_root)) {
        conj.push_back(std::move(s));
      }
    }
    return S::and_(std::move(conj));
  }

 private:
  DraftDialect dialect_;
  std::string root_var_;

  void warn(const std::string& w) { warnings.push_back(w); }

  static JsonPtr member(const JsonValue::Members& ms, const std::string& k) {
    for (const auto& [key, v] : ms) {
      if (key == k) return v;
    }
    return nullptr;
  }

  SchemaPtr tr_ref(const std::string& path) {
    if (path == "#") {
      root_ref_used = true;
      return S::ref(root_var_);
    }
    if (!is_normal_ref(path)) {
      throw InvalidSchemaError("non-normalized $ref (run normalize_refs): " +
                               path);
    }
    return S::ref(unescape_pointer_segment(
        path.substr(std::string("#/definitions/").size())));
  }

  Rational number_arg(const std::string& key, const JsonPtr& v) {
    if (!v->is_num()) {
      if (v->is_bool() &&
          (key == "exclusiveMinimum" || key == "exclusiveMaximum")) {
        throw InvalidSchemaError(
            key + ": the draft-04 boolean form is not supported; use the "
                  "draft-06 numeric form");
      }
      throw InvalidSchemaError(key + " must be a number");
    }
    return v->as_num();
  }

  uint64_t uint_arg(const std::string& key, const JsonPtr& v) {
    uint64_t n = 0;
    if (!as_uint(v, n)) {
      throw InvalidSchemaError(key + " must be a non-negative integer");
    }
    return n;
  }

  std::vector<SchemaPtr> schema_array_arg(const std::string& key,
                                          const JsonPtr& v) {
    if (!v->is_arr()) {
      throw InvalidSchemaError(key + " must be an array of schemas");
    }
    std::vector<SchemaPtr> out;
    for (const auto& x : v->as_arr()) out.push_back(tr(x));
    return out;
  }

  PatternPtr pattern_arg(const std::string& key, const JsonPtr& v) {
    if (!v->is_str()) {
      throw InvalidSchemaError(key + " takes a regular expression string");
    }
    return Pattern::parse(v->as_str());
  }

  SchemaPtr tr_type_name(const std::string& t) {
    if (t == "null") return S::type1(JsonType::Null);
    if (t == "boolean") return S::type1(JsonType::Bool);
    if (t == "number") return S::type1(JsonType::Num);
    if (t == "string") return S::type1(JsonType::Str);
    if (t == "array") return S::type1(JsonType::Arr);
    if (t == "object") return S::type1(JsonType::Obj);
    if (t == "integer") {
      return S::and_({S::type1(JsonType::Num), S::mulof(Rational(1))});
    }
    throw InvalidSchemaError("unknown type name: " + t);
  }

  // nullptr when the keyword contributes nothing here (annotation, group
  // member handled by its leader, unknown)
  SchemaPtr tr_keyword(const JsonValue::Members& ms, const std::string& key,
                       const JsonPtr& v, bool at_root) {
    if (kAnnotations.count(key)) {
      if (key == "format") warn("format is ignored (annotation-only)");
      return nullptr;
    }
    if (key == "definitions") {
      if (!at_root) warn("nested definitions section ignored");
      return nullptr;
    }

    if (key == "allOf") return S::and_(schema_array_arg(key, v));
    if (key == "anyOf") return S::or_(schema_array_arg(key, v));
    if (key == "oneOf") return S::one_of(schema_array_arg(key, v));
    if (key == "not") return S::not_(tr(v));
    if (key == "if") {
      JsonPtr th = member(ms, "then"), el = member(ms, "else");
      return S::if_then_else(tr(v), th ? tr(th) : S::t(),
                             el ? tr(el) : S::t());
    }
    if (key == "then" || key == "else") {
      if (!member(ms, "if")) warn(key + " without if is ignored");
      return nullptr;
    }

    if (key == "const") return S::constant(v);
    if (key == "enum") {
      if (!v->is_arr()) throw InvalidSchemaError("enum must be an array");
      return S::enumeration(v->as_arr());
    }
    if (key == "type") {
      if (v->is_str()) return tr_type_name(v->as_str());
      if (v->is_arr()) {
        std::vector<SchemaPtr> alts;
        for (const auto& x : v->as_arr()) {
          if (!x->is_str()) {
            throw InvalidSchemaError("type list entries must be strings");
          }
          alts.push_back(tr_type_name(x->as_str()));
        }
        return S::or_(std::move(alts));
      }
      throw InvalidSchemaError("type must be a string or a list of strings");
    }

    if (key == "minimum") {
      return S::betw(NumBound::of(number_arg(key, v)), NumBound::pos_inf());
    }
    if (key == "maximum") {
      return S::betw(NumBound::neg_inf(), NumBound::of(number_arg(key, v)));
    }
    if (key == "exclusiveMinimum") {
      return S::xbetw(NumBound::of(number_arg(key, v)), NumBound::pos_inf());
    }
    if (key == "exclusiveMaximum") {
      return S::xbetw(NumBound::neg_inf(), NumBound::of(number_arg(key, v)));
    }
    if (key == "multipleOf") {
      Rational q = number_arg(key, v);
      if (q <= 0) throw InvalidSchemaError("multipleOf must be positive");
      return S::mulof(q);
    }
    if (key == "x-notMulOf") {
      Rational q = number_arg(key, v);
      if (q <= 0) throw InvalidSchemaError("x-notMulOf must be positive");
      return S::not_mulof(q);
    }

    if (key == "minLength") return S::len(uint_arg(key, v), kInf);
    if (key == "maxLength") return S::len(0, uint_arg(key, v));
    if (key == "pattern") return S::pattern(pattern_arg(key, v));

    if (key == "uniqueItems") {
      if (!v->is_bool()) throw InvalidSchemaError("uniqueItems must be bool");
      return v->as_bool() ? S::unique_items() : S::t();
    }
    if (key == "x-repeatedItems") {
      if (!v->is_bool() || !v->as_bool()) {
        throw InvalidSchemaError("x-repeatedItems takes true");
      }
      return S::repeated_items();
    }
    if (key == "minItems") return S::ite(uint_arg(key, v), kInf);
    if (key == "maxItems") return S::ite(0, uint_arg(key, v));

    if (key == "contains") {
      uint64_t lo = 1, hi = kInf;
      bool counted = false;
      if (JsonPtr m = member(ms, "minContains")) {
        if (dialect_ == DraftDialect::Draft2019Subset) {
          lo = uint_arg("minContains", m);
          counted = true;
        }
      }
      if (JsonPtr m = member(ms, "maxContains")) {
        if (dialect_ == DraftDialect::Draft2019Subset) {
          hi = uint_arg("maxContains", m);
          counted = true;
        }
      }
      return counted ? S::cnt(lo, hi, tr(v)) : S::contains(tr(v));
    }
    if (key == "minContains" || key == "maxContains") {
      if (dialect_ != DraftDialect::Draft2019Subset) {
        warn(key + " is a draft-2019 keyword; ignored under draft-06");
      } else if (!member(ms, "contains")) {
        warn(key + " without contains is ignored");
      }
      return nullptr;
    }
    if (key == "x-contAfter") {
      if (!v->is_obj()) {
        throw InvalidSchemaError("x-contAfter takes {\"after\": n, "
                                 "\"contains\": S}");
      }
      JsonPtr n = v->get("after"), s = v->get("contains");
      if (!n || !s) {
        throw InvalidSchemaError("x-contAfter takes {\"after\": n, "
                                 "\"contains\": S}");
      }
      return S::cont_after(uint_arg("x-contAfter.after", n), tr(s));
    }

    if (key == "items") {
      JsonPtr add = member(ms, "additionalItems");
      if (v->is_arr()) {
        std::vector<SchemaPtr> head;
        for (const auto& x : v->as_arr()) head.push_back(tr(x));
        return S::items(std::move(head), add ? tr(add) : S::t());
      }
      if (add) {
        warn("additionalItems is ignored when items is a single schema");
      }
      return S::items({}, tr(v));
    }
    if (key == "additionalItems") {
      if (!member(ms, "items")) warn("additionalItems without items ignored");
      return nullptr;
    }

    if (key == "minProperties") return S::pro(uint_arg(key, v), kInf);
    if (key == "maxProperties") return S::pro(0, uint_arg(key, v));
    if (key == "propertyNames") return S::pnames(tr(v));
    if (key == "required") {
      if (!v->is_arr()) throw InvalidSchemaError("required must be an array");
      std::vector<std::string> names;
      for (const auto& x : v->as_arr()) {
        if (!x->is_str()) {
          throw InvalidSchemaError("required entries must be strings");
        }
        names.push_back(x->as_str());
      }
      return S::req(std::move(names));
    }

    if (key == "properties" || key == "patternProperties" ||
        key == "additionalProperties") {
      // the whole group is translated once, at its first member
      for (const auto& [k2, v2] : ms) {
        if (k2 == key) break;
        if (k2 == "properties" || k2 == "patternProperties" ||
            k2 == "additionalProperties") {
          return nullptr;
        }
      }
      std::vector<PropPair> pairs;
      if (JsonPtr p = member(ms, "properties")) {
        if (!p->is_obj()) throw InvalidSchemaError("properties: not an object");
        for (const auto& [k2, s2] : p->as_obj()) {
          pairs.push_back({Pattern::literal(k2), tr(s2)});
        }
      }
      if (JsonPtr p = member(ms, "patternProperties")) {
        if (!p->is_obj()) {
          throw InvalidSchemaError("patternProperties: not an object");
        }
        for (const auto& [k2, s2] : p->as_obj()) {
          pairs.push_back({Pattern::parse(k2), tr(s2)});
        }
      }
      JsonPtr add = member(ms, "additionalProperties");
      return S::props(std::move(pairs), add ? tr(add) : S::t());
    }
    if (key == "x-pattReq") {
      if (!v->is_obj()) throw InvalidSchemaError("x-pattReq: not an object");
      std::vector<PropPair> pairs;
      for (const auto& [k2, s2] : v->as_obj()) {
        pairs.push_back({Pattern::parse(k2), tr(s2)});
      }
      return S::pattreq(std::move(pairs));
    }

    if (key == "dependentSchemas" ||
        (key == "dependencies" && v->is_obj())) {
      std::vector<SchemaPtr> conj;
      if (!v->is_obj()) {
        throw InvalidSchemaError(key + " must be an object");
      }
      for (const auto& [k2, d2] : v->as_obj()) {
        if (key == "dependencies" && d2->is_arr()) {
          conj.push_back(dependent_required(k2, d2));
        } else {
          conj.push_back(S::implies(
              S::and_({S::type1(JsonType::Obj), S::req({k2})}), tr(d2)));
        }
      }
      return S::and_(std::move(conj));
    }
    if (key == "dependentRequired") {
      if (!v->is_obj()) {
        throw InvalidSchemaError("dependentRequired must be an object");
      }
      std::vector<SchemaPtr> conj;
      for (const auto& [k2, d2] : v->as_obj()) {
        conj.push_back(dependent_required(k2, d2));
      }
      return S::and_(std::move(conj));
    }
    if (key == "dependencies") {
      throw InvalidSchemaError("dependencies must be an object");
    }

    warn("unknown keyword ignored: " + key);
    return nullptr;
  }

  SchemaPtr dependent_required(const std::string& k, const JsonPtr& arr) {
    if (!arr->is_arr()) {
      throw InvalidSchemaError("dependent required entry for " + k +
                               " must be an array of names");
    }
    std::vector<std::string> names;
    for (const auto& x : arr->as_arr()) {
      if (!x->is_str()) {
        throw InvalidSchemaError("dependent required names must be strings");
      }
      names.push_back(x->as_str());
    }
    return S::implies(S::req({k}), S::req(std::move(names)));
  }
};

bool references_root(const JsonPtr& v) {
  std::set<std::string> refs;
  collect_refs(v, refs);
  return refs.count("#") != 0;
}

}  // namespace

DraftDialect infer_dialect(const JsonPtr& raw) {
  if (raw->is_obj()) {
    if (JsonPtr s = raw->get("$schema"); s && s->is_str()) {
      if (s->as_str().find("2019-09") != std::string::npos) {
        return DraftDialect::Draft2019Subset;
      }
    }
  }
  return DraftDialect::Draft06;
}

TranslationResult from_json_schema(const JsonPtr& raw, DraftDialect dialect) {
  TranslationResult out;
  if (raw->is_bool()) {
    out.doc.root = raw->as_bool() ? S::t() : S::f();
    return out;
  }
  if (!raw->is_obj()) {
    throw InvalidSchemaError("a schema must be an object or a boolean");
  }

  JsonPtr defs = raw->get("definitions");
  if (defs && !defs->is_obj()) {
    throw InvalidSchemaError("definitions must be an object");
  }
  std::set<std::string> def_names;
  if (defs) {
    for (const auto& [k, v] : defs->as_obj()) def_names.insert(k);
  }
  std::string xroot = "xroot";
  for (int k = 2; def_names.count(xroot); ++k) {
    xroot = "xroot_" + std::to_string(k);
  }

  FromJson t(dialect, xroot);
  if (defs) {
    for (const auto& [k, v] : defs->as_obj()) {
      out.doc.env.set(k, t.tr(v));
    }
  }
  SchemaPtr root_body = t.tr_members(raw->as_obj(), /*at_root=*/true);
  if (t.root_ref_used || !def_names.empty()) {
    out.doc.env.set(xroot, root_body);
    out.doc.root = S::ref(xroot);
  } else {
    out.doc.root = root_body;
  }
  out.warnings = std::move(t.warnings);
  return out;
}

// ---------------------------------------------------------------------------
// algebra -> JSON Schema

namespace {

class Emitter {
 public:
  Emitter(EmitMode mode, std::set<std::string> def_names)
      : mode_(mode), def_names_(std::move(def_names)) {}

  std::vector<std::pair<std::string, JsonPtr>> extra_defs;
  std::vector<std::string> warnings;

  JsonPtr emit(const SchemaPtr& s) {
    switch (s->op) {
      case Op::True: return jbool(true);
      case Op::False: return jbool(false);
      case Op::Type: {
        if (s->types.size() == 1) {
          return jobj({{"type", jstr(type_name(s->types[0]))}});
        }
        JsonValue::Array names;
        for (JsonType t : s->types) names.push_back(jstr(type_name(t)));
        return jobj({{"type", jarr(std::move(names))}});
      }
      case Op::Const: return jobj({{"const", s->value}});
      case Op::Enum: return jobj({{"enum", jarr(s->values)}});
      case Op::Len: {
        JsonValue::Members ms;
        if (s->nlo > 0) ms.emplace_back("minLength", jnum(s->nlo));
        if (s->nhi != kInf) ms.emplace_back("maxLength", jnum(s->nhi));
        return jobj(std::move(ms));
      }
      case Op::PatternOp:
        return jobj({{"pattern", jstr(s->pattern->source())}});
      case Op::Betw: {
        JsonValue::Members ms;
        if (s->qlo.kind == NumBound::Finite) {
          ms.emplace_back("minimum", jnum(s->qlo.v));
        }
        if (s->qhi.kind == NumBound::Finite) {
          ms.emplace_back("maximum", jnum(s->qhi.v));
        }
        return jobj(std::move(ms));
      }
      case Op::XBetw: {
        JsonValue::Members ms;
        if (s->qlo.kind == NumBound::Finite) {
          ms.emplace_back("exclusiveMinimum", jnum(s->qlo.v));
        }
        if (s->qhi.kind == NumBound::Finite) {
          ms.emplace_back("exclusiveMaximum", jnum(s->qhi.v));
        }
        return jobj(std::move(ms));
      }
      case Op::MulOf: return jobj({{"multipleOf", jnum(s->q)}});
      case Op::NotMulOf:
        if (mode_ == EmitMode::Extended) {
          return jobj({{"x-notMulOf", jnum(s->q)}});
        }
        return with_type_escape(
            JsonType::Num,
            jobj({{"not", jobj({{"multipleOf", jnum(s->q)}})}}));
      case Op::Props: return emit_props(s);
      case Op::Pro: {
        JsonValue::Members ms;
        if (s->nlo > 0) ms.emplace_back("minProperties", jnum(s->nlo));
        if (s->nhi != kInf) ms.emplace_back("maxProperties", jnum(s->nhi));
        return jobj(std::move(ms));
      }
      case Op::Req: {
        JsonValue::Array names;
        for (const auto& k : s->names) names.push_back(jstr(k));
        return jobj({{"required", jarr(std::move(names))}});
      }
      case Op::PNames:
        return jobj({{"propertyNames", emit(s->child)}});
      case Op::PattReq: return emit_pattreq(s);
      case Op::Items: {
        JsonValue::Members ms;
        if (s->kids.empty()) {
          if (!s->child || s->child->op == Op::True) return jbool(true);
          ms.emplace_back("items", emit(s->child));
        } else {
          JsonValue::Array head;
          for (const auto& k : s->kids) head.push_back(emit(k));
          ms.emplace_back("items", jarr(std::move(head)));
          if (s->child && s->child->op != Op::True) {
            ms.emplace_back("additionalItems", emit(s->child));
          }
        }
        return jobj(std::move(ms));
      }
      case Op::ItemAt: {
        JsonValue::Array head;
        for (uint64_t i = 1; i < s->nlo; ++i) head.push_back(jbool(true));
        head.push_back(emit(s->child));
        return jobj({{"items", jarr(std::move(head))}});
      }
      case Op::ItemsAfter: {
        if (s->nlo == 0) return jobj({{"items", emit(s->child)}});
        JsonValue::Array head;
        for (uint64_t i = 0; i < s->nlo; ++i) head.push_back(jbool(true));
        return jobj({{"items", jarr(std::move(head))},
                     {"additionalItems", emit(s->child)}});
      }
      case Op::Ite: {
        JsonValue::Members ms;
        if (s->nlo > 0) ms.emplace_back("minItems", jnum(s->nlo));
        if (s->nhi != kInf) ms.emplace_back("maxItems", jnum(s->nhi));
        return jobj(std::move(ms));
      }
      case Op::Contains: return jobj({{"contains", emit(s->child)}});
      case Op::ContAfter: {
        if (mode_ == EmitMode::Extended) {
          return jobj({{"x-contAfter",
                        jobj({{"after", jnum(s->nlo)},
                              {"contains", emit(s->child)}})}});
        }
        auto [root, ce] = lower_cont_after(s->nlo, s->child, fresh_prefix());
        for (const auto& [name, body] : ce.env.defs()) {
          extra_defs.emplace_back(name, emit(body));
          def_names_.insert(name);
        }
        return emit(root);
      }
      case Op::Cnt: return emit_cnt(s);
      case Op::UniqueItems: return jobj({{"uniqueItems", jbool(true)}});
      case Op::RepeatedItems:
        if (mode_ == EmitMode::Extended) {
          return jobj({{"x-repeatedItems", jbool(true)}});
        }
        return with_type_escape(
            JsonType::Arr,
            jobj({{"not", jobj({{"uniqueItems", jbool(true)}})}}));
      case Op::Ref:
        return jobj({{"$ref", jstr("#/definitions/" +
                                   escape_pointer_segment(s->names[0]))}});
      case Op::Not:
        return jobj({{"not", emit(s->child)}});
      case Op::Or: {
        JsonValue::Array xs;
        for (const auto& k : s->kids) xs.push_back(emit(k));
        return jobj({{"anyOf", jarr(std::move(xs))}});
      }
      case Op::And:
      case Op::Group: return emit_conj(s->kids);
      case Op::Implies:
        return jobj({{"anyOf", jarr({jobj({{"not", emit(s->kids[0])}}),
                                     emit(s->kids[1])})}});
      case Op::IfThenElse:
        return jobj(
            {{"if", emit(s->kids[0])},
             {"then", emit(s->kids[1])},
             {"else", emit(s->kids[2])}});
      case Op::OneOf: {
        JsonValue::Array xs;
        for (const auto& k : s->kids) xs.push_back(emit(k));
        return jobj({{"oneOf", jarr(std::move(xs))}});
      }
    }
    throw std::logic_error("emit: unhandled operator");
  }

 private:
  EmitMode mode_;
  std::set<std::string> def_names_;
  int prefix_counter_ = 0;

  std::string fresh_prefix() {
    for (;;) {
      std::string p = "C" + std::to_string(++prefix_counter_);
      bool clash = false;
      for (const auto& n : def_names_) {
        if (n.rfind(p + "_", 0) == 0) clash = true;
      }
      if (!clash) return p;
    }
  }

  // The dual operators are typed: they hold vacuously on instances of other
  // types, while a bare {"not": ...} of their defining equation would reject
  // those instances (the wrapped keyword is itself vacuous there).  The
  // not-based fallbacks therefore get an escape branch for the other types.
  static JsonPtr with_type_escape(JsonType t, JsonPtr inner) {
    JsonValue::Array others;
    for (JsonType u : {JsonType::Null, JsonType::Bool, JsonType::Num,
                       JsonType::Str, JsonType::Arr, JsonType::Obj}) {
      if (u != t) others.push_back(jstr(type_name(u)));
    }
    return jobj({{"anyOf", jarr({jobj({{"type", jarr(std::move(others))}}),
                                 std::move(inner)})}});
  }

  static const char* type_name(JsonType t) {
    switch (t) {
      case JsonType::Null: return "null";
      case JsonType::Bool: return "boolean";
      case JsonType::Num: return "number";
      case JsonType::Str: return "string";
      case JsonType::Arr: return "array";
      case JsonType::Obj: return "object";
    }
    return "null";
  }

  // conjunction: merge keyword objects when possible, else allOf
  JsonPtr emit_conj(const std::vector<SchemaPtr>& kids) {
    std::vector<JsonPtr> parts;
    for (const auto& k : kids) {
      JsonPtr p = emit(k);
      if (p->is_bool()) {
        if (!p->as_bool()) return jbool(false);
        continue;
      }
      parts.push_back(p);
    }
    if (parts.empty()) return jbool(true);
    if (parts.size() == 1) return parts[0];
    bool mergeable = true;
    std::set<std::string> keys;
    for (const auto& p : parts) {
      for (const auto& [k, v] : p->as_obj()) {
        if (k == "$ref" || !keys.insert(k).second) mergeable = false;
        // keyword groups interact; keep them in separate allOf branches
        if (k == "items" || k == "additionalItems" || k == "properties" ||
            k == "patternProperties" || k == "additionalProperties" ||
            k == "contains" || k == "minContains" || k == "maxContains" ||
            k == "if" || k == "then" || k == "else") {
          mergeable = false;
        }
      }
      if (!mergeable) break;
    }
    if (mergeable) {
      JsonValue::Members ms;
      for (const auto& p : parts) {
        for (const auto& [k, v] : p->as_obj()) ms.emplace_back(k, v);
      }
      return jobj(std::move(ms));
    }
    return jobj({{"allOf", jarr(JsonValue::Array(parts.begin(),
                                                 parts.end()))}});
  }

  JsonPtr emit_props(const SchemaPtr& s) {
    JsonValue::Members props, patprops;
    std::set<std::string> prop_keys, pat_keys;
    bool collide = false;
    for (const auto& p : s->pairs) {
      if (p.pat->is_literal_key()) {
        if (!prop_keys.insert(p.pat->literal_key()).second) collide = true;
        props.emplace_back(p.pat->literal_key(), emit(p.schema));
      } else {
        if (!pat_keys.insert(p.pat->source()).second) collide = true;
        patprops.emplace_back(p.pat->source(), emit(p.schema));
      }
    }
    if (collide) {
      // duplicate keys cannot share one object; fall back to allOf of
      // single-pair props
      std::vector<SchemaPtr> parts;
      for (const auto& p : s->pairs) {
        parts.push_back(S::props({p}, S::t()));
      }
      if (s->child && s->child->op != Op::True) {
        // the additional branch needs all patterns, so keep the original
        // pair list with trivial schemas
        std::vector<PropPair> trivial;
        for (const auto& p : s->pairs) trivial.push_back({p.pat, S::t()});
        parts.push_back(S::props(std::move(trivial), s->child));
      }
      return emit_conj(parts);
    }
    JsonValue::Members ms;
    if (!props.empty()) ms.emplace_back("properties", jobj(std::move(props)));
    if (!patprops.empty()) {
      ms.emplace_back("patternProperties", jobj(std::move(patprops)));
    }
    if (s->child && s->child->op != Op::True) {
      ms.emplace_back("additionalProperties", emit(s->child));
    }
    if (ms.empty()) return jbool(true);
    return jobj(std::move(ms));
  }

  JsonPtr emit_pattreq(const SchemaPtr& s) {
    if (mode_ == EmitMode::Extended) {
      JsonValue::Members pairs;
      std::set<std::string> seen;
      bool collide = false;
      for (const auto& p : s->pairs) {
        if (!seen.insert(p.pat->source()).second) collide = true;
        pairs.emplace_back(p.pat->source(), emit(p.schema));
      }
      if (!collide) return jobj({{"x-pattReq", jobj(std::move(pairs))}});
    }
    // defining equation: pattReq(r:S) = ¬ props(r: ¬S ; t), per pair
    std::vector<JsonPtr> parts;
    for (const auto& p : s->pairs) {
      JsonPtr inner = emit(S::not_(p.schema));
      parts.push_back(with_type_escape(
          JsonType::Obj,
          jobj({{"not", jobj({{"patternProperties",
                               jobj({{p.pat->source(), inner}})}})}})));
    }
    if (parts.size() == 1) return parts[0];
    return jobj({{"allOf", jarr(JsonValue::Array(parts.begin(),
                                                 parts.end()))}});
  }

  JsonPtr emit_cnt(const SchemaPtr& s) {
    if (s->nlo == 1 && s->nhi == kInf) {
      return jobj({{"contains", emit(s->child)}});
    }
    if (mode_ == EmitMode::Draft06WithNot) {
      if (s->nlo == 0 && s->nhi == 0) {
        return with_type_escape(
            JsonType::Arr,
            jobj({{"not", jobj({{"contains", emit(s->child)}})}}));
      }
      warnings.push_back(
          "cnt(" + std::to_string(s->nlo) + "," +
          (s->nhi == kInf ? std::string("inf") : std::to_string(s->nhi)) +
          ",S) is not expressible in draft-06 even with not; emitting "
          "draft-2019 minContains/maxContains");
    }
    JsonValue::Members ms;
    ms.emplace_back("contains", emit(s->child));
    if (s->nlo != 1) ms.emplace_back("minContains", jnum(s->nlo));
    if (s->nhi != kInf) ms.emplace_back("maxContains", jnum(s->nhi));
    return jobj(std::move(ms));
  }
};

}  // namespace

EmissionResult to_json_schema(const Document& d, EmitMode mode) {
  std::set<std::string> names;
  for (const auto& [n, b] : d.env.defs()) names.insert(n);
  Emitter em(mode, names);

  JsonValue::Members defs;
  for (const auto& [n, b] : d.env.defs()) defs.emplace_back(n, em.emit(b));
  JsonPtr root = em.emit(d.root);
  for (const auto& [n, b] : em.extra_defs) defs.emplace_back(n, b);

  EmissionResult out;
  out.warnings = std::move(em.warnings);
  if (defs.empty()) {
    out.schema = root;
    return out;
  }
  JsonValue::Members ms;
  if (root->is_bool()) {
    if (!root->as_bool()) ms.emplace_back("not", jobj({}));
  } else {
    ms = root->as_obj();
  }
  ms.emplace_back("definitions", jobj(std::move(defs)));
  out.schema = jobj(std::move(ms));
  return out;
}

}  // namespace jsalg
