// Schema algebra AST: the core grammar plus the closed-algebra duals
// (pattReq, contAfter, notMulOf, repeatedItems), the counting operator cnt,
// and the derived array operators itemAt/itemsAfter.  Includes static
// well-formedness checks (closing environments, guarded recursion), the
// weighted size measure, the canonical textual serialization and its parser,
// and the schema-to-pattern compilation used to eliminate pNames.
#ifndef JSALG_ALGEBRA_HPP
#define JSALG_ALGEBRA_HPP

#include "json_value.hpp"
#include "patterns.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace jsalg {

struct NotClosingError : std::runtime_error {
  explicit NotClosingError(const std::string& msg) : std::runtime_error(msg) {}
};
struct UnguardedError : std::runtime_error {
  explicit UnguardedError(const std::string& msg) : std::runtime_error(msg) {}
};
struct AlgebraParseError : std::runtime_error {
  explicit AlgebraParseError(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Natural bound with infinity.
constexpr uint64_t kInf = ~uint64_t(0);

// Numeric bound extended with +-infinity.
struct NumBound {
  enum Kind { NegInf, Finite, PosInf } kind = Finite;
  Rational v;

  static NumBound neg_inf() { return {NegInf, {}}; }
  static NumBound pos_inf() { return {PosInf, {}}; }
  static NumBound of(Rational q) { return {Finite, std::move(q)}; }
  bool operator==(const NumBound& o) const {
    return kind == o.kind && (kind != Finite || v == o.v);
  }
};
// bound <= x / x <= bound / bound < x / x < bound
bool le_lower(const NumBound& b, const Rational& x);
bool le_upper(const Rational& x, const NumBound& b);
bool lt_lower(const NumBound& b, const Rational& x);
bool lt_upper(const Rational& x, const NumBound& b);

enum class Op {
  True, False,
  Type, Const, Enum,
  Len, PatternOp,
  Betw, XBetw, MulOf, NotMulOf,
  Props, Pro, Req, PNames, PattReq,
  Items, ItemAt, ItemsAfter, Ite, Contains, ContAfter, Cnt,
  UniqueItems, RepeatedItems,
  Ref,
  Not, Or, And, Implies, IfThenElse, OneOf, Group,
};

const char* op_name(Op op);

class Schema;
using SchemaPtr = std::shared_ptr<const Schema>;

struct PropPair {
  PatternPtr pat;
  SchemaPtr schema;
};

class Schema {
 public:
  Op op;
  std::vector<JsonType> types;       // Type (sorted, deduplicated)
  JsonPtr value;                     // Const
  std::vector<JsonPtr> values;       // Enum
  uint64_t nlo = 0, nhi = kInf;      // Len/Pro/Ite/Cnt bounds; ItemAt index
                                     // (nlo); ItemsAfter/ContAfter n (nlo)
  NumBound qlo, qhi;                 // Betw, XBetw
  Rational q;                        // MulOf, NotMulOf
  PatternPtr pattern;                // PatternOp
  std::vector<PropPair> pairs;       // Props, PattReq
  SchemaPtr child;                   // Props additional; PNames; ItemAt;
                                     // ItemsAfter; Contains; ContAfter; Cnt;
                                     // Not; Items tail
  std::vector<SchemaPtr> kids;       // And/Or/OneOf/Group; Items head;
                                     // Implies(2); IfThenElse(3)
  std::vector<std::string> names;    // Req; Ref (names[0])

  explicit Schema(Op o) : op(o) {}
};

// Smart constructors.  Illegal bounds normalize to f and trivial full-range
// bounds to t (the not-pushing rules rely on this).
namespace S {
SchemaPtr t();
SchemaPtr f();
SchemaPtr type(std::vector<JsonType> ts);
SchemaPtr type1(JsonType t);
SchemaPtr constant(JsonPtr v);
SchemaPtr enumeration(std::vector<JsonPtr> vs);
SchemaPtr len(uint64_t lo, uint64_t hi);
SchemaPtr pattern(PatternPtr p);
SchemaPtr betw(NumBound lo, NumBound hi);
SchemaPtr xbetw(NumBound lo, NumBound hi);
SchemaPtr mulof(Rational q);
SchemaPtr not_mulof(Rational q);
SchemaPtr props(std::vector<PropPair> pairs, SchemaPtr additional);
SchemaPtr pro(uint64_t lo, uint64_t hi);
SchemaPtr req(std::vector<std::string> names);
SchemaPtr pnames(SchemaPtr s);
SchemaPtr pattreq(std::vector<PropPair> pairs);
SchemaPtr items(std::vector<SchemaPtr> head, SchemaPtr tail);
SchemaPtr item_at(uint64_t i, SchemaPtr s);      // i >= 1
SchemaPtr items_after(uint64_t n, SchemaPtr s);  // n >= 0
SchemaPtr ite(uint64_t lo, uint64_t hi);
SchemaPtr contains(SchemaPtr s);
SchemaPtr cont_after(uint64_t n, SchemaPtr s);
SchemaPtr cnt(uint64_t lo, uint64_t hi, SchemaPtr s);
SchemaPtr unique_items();
SchemaPtr repeated_items();
SchemaPtr ref(std::string name);
SchemaPtr not_(SchemaPtr s);
SchemaPtr or_(std::vector<SchemaPtr> kids);
SchemaPtr and_(std::vector<SchemaPtr> kids);
SchemaPtr implies(SchemaPtr a, SchemaPtr b);
SchemaPtr if_then_else(SchemaPtr a, SchemaPtr b, SchemaPtr c);
SchemaPtr one_of(std::vector<SchemaPtr> kids);
SchemaPtr group(std::vector<SchemaPtr> kids);
}  // namespace S

class Env {
 public:
  const std::vector<std::pair<std::string, SchemaPtr>>& defs() const {
    return defs_;
  }
  bool has(const std::string& name) const { return index_.count(name) != 0; }
  SchemaPtr get(const std::string& name) const;
  void set(const std::string& name, SchemaPtr s);
  size_t size() const { return defs_.size(); }

 private:
  std::vector<std::pair<std::string, SchemaPtr>> defs_;
  std::map<std::string, size_t> index_;
};

struct Document {
  SchemaPtr root;
  Env env;
  // Naming prefix chosen by not-completion for dual variables ("not_", or a
  // longer "not__.." when a definition already uses that prefix).
  std::string dual_prefix;
};

// --- static checks ---------------------------------------------------------

std::set<std::string> free_vars(const SchemaPtr& s);

// ok: nullopt; otherwise the cycle path x1 -> x2 -> ... -> x1.
// Throws NotClosingError when a used variable is undefined.
std::optional<std::vector<std::string>> check_guarded(const Document& d);

// Weighted size: itemAt/itemsAfter/contAfter cost 1 + ceil(log2(i+1)) +
// size(child); patterns cost their source length; constants their canonical
// JSON length; every other node 1 + sum of children.
uint64_t size_of(const SchemaPtr& s);
uint64_t size_of(const Document& d);

// Rewrites implies, ifThenElse, oneOf, group, enum into the core
// connectives (oneOf naively as the disjunction of n conjunctions).
SchemaPtr expand_derived(const SchemaPtr& s);

// --- textual serialization -------------------------------------------------

std::string to_text(const SchemaPtr& s);
std::string to_text(const Document& d);
Document document_from_text(const std::string& text);
SchemaPtr schema_from_text(const std::string& text);

// --- schema-to-pattern compilation (pNames elimination) --------------------

// Pattern whose language is exactly the set of strings satisfying s under e.
// Throws NotClosingError / UnguardedError.
PatternPtr patt_of_schema(const SchemaPtr& s, const Env& e);

}  // namespace jsalg

#endif  // JSALG_ALGEBRA_HPP
