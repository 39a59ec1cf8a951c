// Not-elimination: simplification passes, not-completion of variables,
// not-pushing through every operator of the closed algebra, pruning, the
// divide-and-conquer counting encodings, and the syntactic expressibility
// analyzer.
#ifndef JSALG_NOTELIM_HPP
#define JSALG_NOTELIM_HPP

#include "algebra.hpp"

#include <string>
#include <utility>
#include <vector>

namespace jsalg {

enum class OneOfMode { Naive, Linear };

// Structural schema equality (patterns compared by source).
bool schema_equal(const SchemaPtr& a, const SchemaPtr& b);

// Simplification passes: singleton types, const/enum elimination, pNames
// elimination, derived-connective expansion (with naive or linear oneOf
// compilation; duplicated arguments are bound to fresh variables).  The
// unary expansion of props/items is deferred to push_not, which performs it
// exactly where a negation reaches the node; positive occurrences keep their
// compact n-ary form.
Document simplify(const Document& d, OneOfMode mode = OneOfMode::Naive);

// Extends the environment with not_x : ¬body for every x : body; the dual
// name map is recorded inside the returned document's env naming convention
// and queried via dual_name.
Document not_complete(const Document& d);
// Dual variable of x after not_complete (involutive).
std::string dual_name(const Env& env, const std::string& x);

// Innermost-first rewriting until no negation remains anywhere.
Document push_not(const Document& d);

// Drop definitions unreachable from the root.
Document prune(const Document& d);

// Full pipeline: simplify -> not_complete -> push_not -> prune.
Document not_eliminate(const Document& d, OneOfMode mode = OneOfMode::Naive);

// True when the document contains no not/implies/ifThenElse/oneOf node.
bool is_negation_free(const Document& d);

// --- standalone encodings --------------------------------------------------

// Negation-free dual of ¬props over literal keys (common-use case 1):
// type(Obj) ∧ ⋁ᵢ (req(kᵢ) ∧ props(⟨⟨kᵢ⟩⟩:¬Sᵢ;t)); the ¬Sᵢ are pushed.
SchemaPtr neg_props_keys(
    const std::vector<std::pair<std::string, SchemaPtr>>& keys);

struct CountingEnv {
  Env env;
  uint64_t n = 0;       // number of keys / head length
  uint64_t levels = 0;  // ceil(log2(n))
};

// Halving-interval encoding of ¬props(k₁..kₙ:t;f) (closed-object negation):
// returns (type(Obj) ∧ ⋁ᵢ (U ∧ pro(i+1,∞)), env of U variables).
std::pair<SchemaPtr, CountingEnv> counting_env_for_keys(
    const std::vector<std::string>& keys, const std::string& prefix = "U");

// contAfter(n,S) lowered to counting: (⋁ᵢ (U ∧ cnt(i+1,∞,S)), env).
// n = 0 returns cnt(1,∞,S) with an empty environment.  The generated bodies
// contain ¬S nodes; callers that need a negation-free form push them.
std::pair<SchemaPtr, CountingEnv> lower_cont_after(
    uint64_t n, const SchemaPtr& s, const std::string& prefix = "C");

struct CaseNotApplicable : std::runtime_error {
  explicit CaseNotApplicable(const std::string& m) : std::runtime_error(m) {}
};

// The three common-use-case duals for ¬items(head;tail).
SchemaPtr neg_items_common(const std::vector<SchemaPtr>& head,
                           const SchemaPtr& tail, int case_no);

// Full negation for req(k₁..kₙ) and contains(S).
SchemaPtr neg_req_contains(const SchemaPtr& node);

// --- expressibility analysis ----------------------------------------------

enum class ExprClass { KeysTop, KeysClosed, ItemsCommon, InherentlyNegative,
                       Unknown };

struct ExprFinding {
  std::string path;  // operator path inside the document
  ExprClass cls;
  std::string rule;  // citing rule for InherentlyNegative
};

struct ExpressibilityReport {
  std::vector<ExprFinding> findings;
};

ExpressibilityReport analyze_expressibility(const Document& d);

// --- size-ratio statistics -------------------------------------------------

struct SizeRatioRecord {
  uint64_t input_chars = 0;
  uint64_t output_chars = 0;
  double ratio = 0.0;
  double elapsed_ms = 0.0;
  double ms_per_kb = 0.0;
};

SizeRatioRecord stats(const Document& before, const Document& after,
                      double elapsed_ms);

}  // namespace jsalg

#endif  // JSALG_NOTELIM_HPP
