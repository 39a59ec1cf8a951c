// Bidirectional translation between JSON Schema documents and algebra
// documents: $ref normalization into the definitions section, keyword-by-
// keyword translation into the algebra, and emission back to JSON Schema in
// three flavours (vendor-extended, draft-2019 subset, draft-06 plus not).
#ifndef JSALG_TRANSLATE_HPP
#define JSALG_TRANSLATE_HPP

#include "algebra.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace jsalg {

enum class DraftDialect { Draft06, Draft2019Subset };
enum class EmitMode { Extended, Draft2019, Draft06WithNot };

struct UnresolvedRefError : std::runtime_error {
  explicit UnresolvedRefError(const std::string& m) : std::runtime_error(m) {}
};
struct InvalidSchemaError : std::runtime_error {
  explicit InvalidSchemaError(const std::string& m) : std::runtime_error(m) {}
};

// Rewrites every "$ref" whose path is neither "#" nor "#/definitions/x" by
// copying the referred subschema under definitions (name: path with "/"
// flattened to "_") and retargeting the reference.  Idempotent.
JsonPtr normalize_refs(const JsonPtr& raw);

struct TranslationResult {
  Document doc;
  std::vector<std::string> warnings;
};

// Keyword-table translation; expects normalize_refs output.  The vendor
// keywords emitted by EmitMode::Extended are recognized under both dialects.
TranslationResult from_json_schema(const JsonPtr& raw, DraftDialect dialect);

struct EmissionResult {
  JsonPtr schema;
  std::vector<std::string> warnings;
};

EmissionResult to_json_schema(const Document& d, EmitMode mode);

// Dialect from a "$schema" URI; Draft06 when absent or unrecognized.
DraftDialect infer_dialect(const JsonPtr& raw);

}  // namespace jsalg

#endif  // JSALG_TRANSLATE_HPP
