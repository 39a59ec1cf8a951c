// jsnot: translate JSON Schema to the algebra and back, run not-elimination,
// validate instances, and benchmark a corpus directory.
#include "generator.hpp"
#include "notelim.hpp"
#include "semantics.hpp"
#include "translate.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace jsalg;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw CliError("cannot write " + out_path);
  out << text;
  if (text.empty() || text.back() != '\n') out << "\n";
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{' || c == '[' || c == '"' || c == 't' || c == 'f' ||
           c == 'n' || c == '-' || (c >= '0' && c <= '9');
  }
  return false;
}

DraftDialect dialect_arg(const std::string& name, const JsonPtr& raw) {
  if (name == "draft06") return DraftDialect::Draft06;
  if (name == "draft2019") return DraftDialect::Draft2019Subset;
  return infer_dialect(raw);  // "auto"
}

EmitMode emit_mode_arg(const std::string& name) {
  if (name == "extended") return EmitMode::Extended;
  if (name == "draft2019") return EmitMode::Draft2019;
  return EmitMode::Draft06WithNot;
}

struct LoadedDoc {
  Document doc;
  std::vector<std::string> warnings;
};

// A *.json / JSON-looking file is treated as JSON Schema; anything else as
// algebra text.
LoadedDoc load_document(const std::string& path, const std::string& dialect) {
  std::string text = read_file(path);
  bool json = path.size() > 5 && path.rfind(".json") == path.size() - 5;
  if (!json) json = looks_like_json(text);
  LoadedDoc out;
  if (json) {
    JsonPtr raw = parse_json(text);
    auto tr = from_json_schema(normalize_refs(raw), dialect_arg(dialect, raw));
    out.doc = std::move(tr.doc);
    out.warnings = std::move(tr.warnings);
  } else {
    out.doc = document_from_text(text);
  }
  return out;
}

uint64_t seed_value(uint64_t cli_seed) {
  if (const char* env = std::getenv("JSNOT_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return cli_seed;
}

std::string join_warnings(const std::vector<std::string>& ws) {
  std::string out;
  for (const auto& w : ws) {
    if (!out.empty()) out += "; ";
    out += w;
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

int run(int argc, char** argv) {
  CLI::App app{"JSON Schema algebra tool: translation, not-elimination, "
               "validation, corpus reports"};
  app.require_subcommand(1);
  uint64_t seed = 0;
  app.add_option("--seed", seed, "RNG seed (env JSNOT_SEED overrides)");

  // --- translate -----------------------------------------------------------
  auto* c_tr = app.add_subcommand("translate",
                                  "JSON Schema -> algebra text (or back)");
  std::string tr_in, tr_dialect = "auto", tr_mode = "forward", tr_out;
  std::string tr_target = "extended";
  c_tr->add_option("input", tr_in)->required();
  c_tr->add_option("--dialect", tr_dialect)
      ->check(CLI::IsMember({"auto", "draft06", "draft2019"}));
  c_tr->add_option("--mode", tr_mode)
      ->check(CLI::IsMember({"forward", "back"}));
  c_tr->add_option("--target", tr_target,
                   "JSON Schema flavour for --mode back")
      ->check(CLI::IsMember({"extended", "draft2019", "draft06_with_not"}));
  c_tr->add_option("--out", tr_out);

  // --- notelim -------------------------------------------------------------
  auto* c_ne = app.add_subcommand("notelim", "run the full pipeline");
  std::string ne_in, ne_oneof = "naive", ne_target = "text", ne_out;
  std::string ne_dialect = "auto";
  bool ne_negate = false, ne_stats = false;
  c_ne->add_option("input", ne_in)->required();
  c_ne->add_option("--oneof", ne_oneof)
      ->check(CLI::IsMember({"naive", "linear"}));
  c_ne->add_option("--target", ne_target,
                   "output form: algebra text or a JSON Schema flavour")
      ->check(CLI::IsMember(
          {"text", "extended", "draft2019", "draft06_with_not"}));
  c_ne->add_option("--dialect", ne_dialect)
      ->check(CLI::IsMember({"auto", "draft06", "draft2019"}));
  c_ne->add_flag("--negate-root", ne_negate,
                 "wrap the document root in a negation first");
  c_ne->add_flag("--stats", ne_stats, "print a run-record line to stderr");
  c_ne->add_option("--out", ne_out);

  // --- validate ------------------------------------------------------------
  auto* c_va = app.add_subcommand("validate",
                                  "validate JSON instances against a schema");
  std::string va_schema, va_dialect = "auto";
  std::vector<std::string> va_instances;
  c_va->add_option("schema", va_schema)->required();
  c_va->add_option("instances", va_instances,
                   "instance files or JSON literals")
      ->required();
  c_va->add_option("--dialect", va_dialect)
      ->check(CLI::IsMember({"auto", "draft06", "draft2019"}));

  // --- check ---------------------------------------------------------------
  auto* c_ck = app.add_subcommand(
      "check", "well-formedness and expressibility analysis");
  std::string ck_in, ck_dialect = "auto";
  c_ck->add_option("input", ck_in)->required();
  c_ck->add_option("--dialect", ck_dialect)
      ->check(CLI::IsMember({"auto", "draft06", "draft2019"}));

  // --- equiv ---------------------------------------------------------------
  auto* c_eq = app.add_subcommand("equiv",
                                  "sample-based equivalence of two schemas");
  std::string eq_a, eq_b, eq_dialect = "auto";
  size_t eq_n = 500;
  c_eq->add_option("a", eq_a)->required();
  c_eq->add_option("b", eq_b)->required();
  c_eq->add_option("--n", eq_n, "number of sampled instances");
  c_eq->add_option("--dialect", eq_dialect)
      ->check(CLI::IsMember({"auto", "draft06", "draft2019"}));

  // --- corpus --------------------------------------------------------------
  auto* c_co = app.add_subcommand("corpus",
                                  "not-elimination report over a directory");
  std::string co_dir, co_report, co_oneof = "naive", co_dialect = "auto";
  c_co->add_option("dir", co_dir)->required();
  c_co->add_option("--report", co_report, "TSV output file (default stdout)");
  c_co->add_option("--oneof", co_oneof)
      ->check(CLI::IsMember({"naive", "linear"}));
  c_co->add_option("--dialect", co_dialect)
      ->check(CLI::IsMember({"auto", "draft06", "draft2019"}));

  CLI11_PARSE(app, argc, argv);

  if (c_tr->parsed()) {
    if (tr_mode == "back") {
      Document d = document_from_text(read_file(tr_in));
      auto em = to_json_schema(d, emit_mode_arg(tr_target));
      for (const auto& w : em.warnings) std::cerr << "warning: " << w << "\n";
      write_output(tr_out, serialize(em.schema));
    } else {
      auto loaded = load_document(tr_in, tr_dialect);
      for (const auto& w : loaded.warnings) {
        std::cerr << "warning: " << w << "\n";
      }
      write_output(tr_out, to_text(loaded.doc));
    }
    return 0;
  }

  if (c_ne->parsed()) {
    auto loaded = load_document(ne_in, ne_dialect);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
    Document in_doc = loaded.doc;
    if (ne_negate) in_doc.root = S::not_(in_doc.root);
    OneOfMode mode =
        ne_oneof == "linear" ? OneOfMode::Linear : OneOfMode::Naive;
    auto t0 = std::chrono::steady_clock::now();
    Document out_doc = not_eliminate(in_doc, mode);
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (ne_target == "text") {
      write_output(ne_out, to_text(out_doc));
    } else {
      auto em = to_json_schema(out_doc, emit_mode_arg(ne_target));
      for (const auto& w : em.warnings) std::cerr << "warning: " << w << "\n";
      write_output(ne_out, serialize(em.schema));
    }
    if (ne_stats) {
      SizeRatioRecord r = stats(in_doc, out_doc, ms);
      std::cerr << ne_in << "\tok\t" << fmt(r.elapsed_ms) << "\t"
                << r.input_chars << "\t" << r.output_chars << "\t"
                << fmt(r.ratio) << "\n";
    }
    return 0;
  }

  if (c_va->parsed()) {
    auto loaded = load_document(va_schema, va_dialect);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
    if (auto cycle = check_guarded(loaded.doc)) {
      std::string msg = "unguarded recursion:";
      for (const auto& x : *cycle) msg += " " + x;
      throw CliError(msg);
    }
    bool all = true;
    for (const auto& arg : va_instances) {
      std::string text = fs::exists(arg) ? read_file(arg) : arg;
      JsonPtr j = parse_json(text);
      bool ok = valid(j, loaded.doc);
      all = all && ok;
      std::cout << (ok ? "true" : "false") << "\n";
    }
    return all ? 0 : 1;
  }

  if (c_ck->parsed()) {
    auto loaded = load_document(ck_in, ck_dialect);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
    if (auto cycle = check_guarded(loaded.doc)) {
      std::cout << "guarded: no (";
      for (size_t i = 0; i < cycle->size(); ++i) {
        if (i) std::cout << " -> ";
        std::cout << (*cycle)[i];
      }
      std::cout << ")\n";
      return 1;
    }
    std::cout << "guarded: yes\n";
    ExpressibilityReport rep = analyze_expressibility(loaded.doc);
    for (const auto& f : rep.findings) {
      const char* cls = "";
      switch (f.cls) {
        case ExprClass::KeysTop: cls = "keys-top"; break;
        case ExprClass::KeysClosed: cls = "keys-closed"; break;
        case ExprClass::ItemsCommon: cls = "items-common"; break;
        case ExprClass::InherentlyNegative: cls = "inherently-negative"; break;
        case ExprClass::Unknown: cls = "unknown"; break;
      }
      std::cout << f.path << "\t" << cls;
      if (!f.rule.empty()) std::cout << "\t" << f.rule;
      std::cout << "\n";
    }
    return 0;
  }

  if (c_eq->parsed()) {
    auto a = load_document(eq_a, eq_dialect);
    auto b = load_document(eq_b, eq_dialect);
    InstanceGenerator gen(seed_value(seed));
    auto v = equiv_sample(a.doc, b.doc, gen, eq_n);
    if (v.indistinguishable) {
      std::cout << "indistinguishable\n";
      return 0;
    }
    std::cout << "counterexample: " << serialize(v.counterexample)
              << " (valid in " << (v.valid_in_first ? "first" : "second")
              << " only)\n";
    return 1;
  }

  if (c_co->parsed()) {
    if (!fs::is_directory(co_dir)) {
      throw CliError(co_dir + " is not a directory");
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(co_dir)) {
      if (e.is_regular_file() && e.path().extension() == ".json") {
        files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    OneOfMode mode =
        co_oneof == "linear" ? OneOfMode::Linear : OneOfMode::Naive;

    std::ostringstream tsv;
    tsv << "file\tok\telapsed_ms\tinput_chars\toutput_chars\tratio\t"
           "warnings\n";
    size_t ok_count = 0;
    double sum_ms = 0, sum_ms_per_kb = 0, sum_ratio = 0, max_ratio = 0;
    for (const auto& f : files) {
      std::string warn;
      try {
        auto loaded = load_document(f.string(), co_dialect);
        warn = join_warnings(loaded.warnings);
        auto t0 = std::chrono::steady_clock::now();
        Document out_doc = not_eliminate(loaded.doc, mode);
        auto t1 = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        SizeRatioRecord r = stats(loaded.doc, out_doc, ms);
        tsv << f.filename().string() << "\ttrue\t" << fmt(r.elapsed_ms)
            << "\t" << r.input_chars << "\t" << r.output_chars << "\t"
            << fmt(r.ratio) << "\t" << warn << "\n";
        ++ok_count;
        sum_ms += r.elapsed_ms;
        sum_ms_per_kb += r.ms_per_kb;
        sum_ratio += r.ratio;
        max_ratio = std::max(max_ratio, r.ratio);
      } catch (const std::exception& e) {
        tsv << f.filename().string() << "\tfalse\t0\t0\t0\t0\t" << e.what()
            << "\n";
      }
    }
    double n = double(ok_count ? ok_count : 1);
    std::cout << "files: " << files.size() << ", processed: " << ok_count
              << "\n\n";
    std::cout << "runtime\n  avg ms      : " << fmt(sum_ms / n)
              << "\n  avg ms per KB: " << fmt(sum_ms_per_kb / n) << "\n\n";
    std::cout << "size ratio\n  avg: " << fmt(sum_ratio / n)
              << "\n  max: " << fmt(max_ratio) << "\n\n";
    if (co_report.empty()) {
      std::cout << tsv.str();
    } else {
      write_output(co_report, tsv.str());
    }
    return ok_count == files.size() ? 0 : 1;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const JsonParseError& e) {
    std::cerr << "error: JSON: " << e.what() << "\n";
  } catch (const PatternError& e) {
    std::cerr << "error: pattern: " << e.what() << "\n";
  } catch (const AlgebraParseError& e) {
    std::cerr << "error: algebra text: " << e.what() << "\n";
  } catch (const NotClosingError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const UnguardedError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const UnresolvedRefError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const InvalidSchemaError& e) {
    std::cerr << "error: invalid schema: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
