// Python bindings for the main operations: translation, not-elimination,
// validation, and sample-based equivalence.  Schemas cross the boundary as
// text (JSON Schema or the algebra's own syntax).
#include "generator.hpp"
#include "notelim.hpp"
#include "semantics.hpp"
#include "translate.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace jsalg;

namespace {

DraftDialect dialect_of(const std::string& name, const JsonPtr& raw) {
  if (name == "draft06") return DraftDialect::Draft06;
  if (name == "draft2019") return DraftDialect::Draft2019Subset;
  return infer_dialect(raw);
}

EmitMode mode_of(const std::string& name) {
  if (name == "extended") return EmitMode::Extended;
  if (name == "draft2019") return EmitMode::Draft2019;
  if (name == "draft06_with_not") return EmitMode::Draft06WithNot;
  throw std::invalid_argument("unknown emit mode: " + name);
}

OneOfMode oneof_of(const std::string& name) {
  if (name == "linear") return OneOfMode::Linear;
  return OneOfMode::Naive;
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{' || c == '[' || c == '"' || c == 't' || c == 'f' ||
           c == 'n' || c == '-' || (c >= '0' && c <= '9');
  }
  return false;
}

Document load(const std::string& text, const std::string& dialect) {
  if (looks_like_json(text)) {
    JsonPtr raw = parse_json(text);
    return from_json_schema(normalize_refs(raw), dialect_of(dialect, raw)).doc;
  }
  return document_from_text(text);
}

}  // namespace

PYBIND11_MODULE(jsnotalg, m) {
  m.doc() = "JSON Schema algebra: translation and not-elimination";

  m.def(
      "translate",
      [](const std::string& schema, const std::string& dialect) {
        JsonPtr raw = parse_json(schema);
        auto tr = from_json_schema(normalize_refs(raw),
                                   dialect_of(dialect, raw));
        return to_text(tr.doc);
      },
      py::arg("schema_json"), py::arg("dialect") = "auto",
      "JSON Schema text to canonical algebra text.");

  m.def(
      "not_eliminate",
      [](const std::string& text, const std::string& oneof, bool negate_root,
         const std::string& dialect) {
        Document d = load(text, dialect);
        if (negate_root) d.root = S::not_(d.root);
        return to_text(jsalg::not_eliminate(d, oneof_of(oneof)));
      },
      py::arg("text"), py::arg("oneof") = "naive",
      py::arg("negate_root") = false, py::arg("dialect") = "auto",
      "Full pipeline on algebra text or JSON Schema text.");

  m.def(
      "to_json_schema",
      [](const std::string& text, const std::string& mode,
         const std::string& dialect) {
        auto em = jsalg::to_json_schema(load(text, dialect), mode_of(mode));
        return serialize(em.schema);
      },
      py::arg("text"), py::arg("mode") = "extended",
      py::arg("dialect") = "auto");

  m.def(
      "validate",
      [](const std::string& schema_text, const std::string& instance_json,
         const std::string& dialect) {
        Document d = load(schema_text, dialect);
        return validate(parse_json(instance_json), d).valid;
      },
      py::arg("schema_text"), py::arg("instance_json"),
      py::arg("dialect") = "auto");

  m.def(
      "is_negation_free",
      [](const std::string& text, const std::string& dialect) {
        return jsalg::is_negation_free(load(text, dialect));
      },
      py::arg("text"), py::arg("dialect") = "auto");

  m.def(
      "equiv",
      [](const std::string& a, const std::string& b, size_t n, uint64_t seed,
         const std::string& dialect) -> py::object {
        InstanceGenerator gen(seed);
        auto v = equiv_sample(load(a, dialect), load(b, dialect), gen, n);
        if (v.indistinguishable) return py::none();
        return py::str(serialize(v.counterexample));
      },
      py::arg("a"), py::arg("b"), py::arg("n") = 500, py::arg("seed") = 0,
      py::arg("dialect") = "auto",
      "None when indistinguishable, else a counterexample as JSON text.");

  m.def(
      "size_of",
      [](const std::string& text, const std::string& dialect) {
        return jsalg::size_of(load(text, dialect));
      },
      py::arg("text"), py::arg("dialect") = "auto");
}
