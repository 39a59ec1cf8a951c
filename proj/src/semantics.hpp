// Reference validator: direct recursive unfolding of the algebra semantics.
// Typed operators hold vacuously on instances of other types; guarded
// recursion guarantees termination (a dynamic guard stack backs up the
// static check).
#ifndef JSALG_SEMANTICS_HPP
#define JSALG_SEMANTICS_HPP

#include "algebra.hpp"
#include "json_value.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jsalg {

struct ValidationOutcome {
  bool valid = false;
  // best-effort (path-into-instance, failing operator) pairs; empty iff valid
  std::vector<std::pair<std::string, std::string>> trace;
};

ValidationOutcome validate(const JsonPtr& j, const Document& d);
// convenience: just the boolean
bool valid(const JsonPtr& j, const Document& d);
// evaluate a schema against an explicit environment
bool eval_schema(const JsonPtr& j, const SchemaPtr& s, const Env& env);

class InstanceGenerator;

struct EquivVerdict {
  bool indistinguishable = true;
  JsonPtr counterexample;  // set when not indistinguishable
  bool valid_in_first = false;
};

// Samples n instances (plus schema-derived hint instances) and looks for a
// validation disagreement.
EquivVerdict equiv_sample(const Document& d1, const Document& d2,
                          InstanceGenerator& gen, size_t n);

}  // namespace jsalg

#endif  // JSALG_SEMANTICS_HPP
