// Regular-expression engine closed under complement and intersection.
//
// Patterns use ECMA-262-style syntax (the subset without back-references and
// lookaround) and are compiled to total DFAs over a partitioned code-point
// alphabet.  Matching uses SEARCH semantics: a string matches if it contains
// a match, with ^ and $ anchoring to the string boundaries.  Complement and
// intersection are computed on the DFA and converted back to a concrete
// regex by state elimination, emitted anchored as ^(?:...)$.
#ifndef JSALG_PATTERNS_HPP
#define JSALG_PATTERNS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jsalg {

struct PatternError : std::runtime_error {
  enum class Kind { Syntax, Unsupported, LimitExceeded };
  Kind kind;
  PatternError(Kind k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
};

// Sorted, disjoint, non-adjacent inclusive code-point ranges.
struct CharSet {
  std::vector<std::pair<uint32_t, uint32_t>> ranges;

  static CharSet single(uint32_t cp) { return CharSet{{{cp, cp}}}; }
  static CharSet all();  // 0 .. 0x10FFFF
  bool contains(uint32_t cp) const;
  bool empty() const { return ranges.empty(); }
  void add(uint32_t lo, uint32_t hi);
  void normalize();
  CharSet negated() const;
  CharSet unioned(const CharSet& other) const;
};

// Total DFA.  The alphabet is partitioned into classes by `cuts`:
// class i covers code points [cuts[i], cuts[i+1]-1]; cuts.front()==0 and
// cuts.back()==0x110000.
struct CompiledDfa {
  std::vector<uint32_t> cuts;
  std::vector<std::vector<int>> trans;  // [state][class] -> state
  std::vector<char> accepting;
  int start = 0;

  size_t num_classes() const { return cuts.size() - 1; }
  int class_of(uint32_t cp) const;
  bool matches(const std::string& utf8) const;
};

CompiledDfa complement(const CompiledDfa& d);
CompiledDfa intersect(const CompiledDfa& a, const CompiledDfa& b);
CompiledDfa dfa_union(const CompiledDfa& a, const CompiledDfa& b);
CompiledDfa minimize(const CompiledDfa& d);
bool is_empty(const CompiledDfa& d);
bool is_finite(const CompiledDfa& d);
// Language equality via product-emptiness.
bool equivalent(const CompiledDfa& a, const CompiledDfa& b);
// Shortest-first witnesses; throws LimitExceeded if the language holds more
// than `limit` strings.
std::vector<std::string> enumerate_language(const CompiledDfa& d, size_t limit);
// Shortest member, if any.
std::optional<std::string> shortest_witness(const CompiledDfa& d);
// State elimination; the result re-parses to the same language and is
// emitted anchored (^(?:...)$) so search semantics coincide with full match.
std::string dfa_to_regex(const CompiledDfa& d);

class Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

class Pattern {
 public:
  // Throws PatternError on syntax errors and on the unsupported dialect
  // (back-references, lookaround, word-boundary assertions).
  static PatternPtr parse(const std::string& source);
  // keykey(k): anchored pattern whose language is exactly {k}.
  static PatternPtr literal(const std::string& k);
  static PatternPtr any();   // T-dot: every string
  static PatternPtr none();  // F-dot: empty language
  // Not-dot / And-dot / union; eagerly computed via the DFA and rendered
  // back to a concrete regex.
  static PatternPtr complement(const PatternPtr& p);
  static PatternPtr intersect(const PatternPtr& a, const PatternPtr& b);
  static PatternPtr alt(const PatternPtr& a, const PatternPtr& b);

  const std::string& source() const { return source_; }
  const CompiledDfa& dfa() const { return dfa_; }
  bool matches(const std::string& s) const { return dfa_.matches(s); }
  bool is_literal_key() const { return literal_key_.has_value(); }
  const std::string& literal_key() const { return *literal_key_; }

  Pattern(std::string source, CompiledDfa dfa,
          std::optional<std::string> literal_key)
      : source_(std::move(source)),
        dfa_(std::move(dfa)),
        literal_key_(std::move(literal_key)) {}

 private:
  std::string source_;
  CompiledDfa dfa_;
  // Set when this pattern is keykey(k); lets the analyzer and the JSON
  // Schema emitter recognize plain property names.
  std::optional<std::string> literal_key_;
};

// Regex-escape a string so it matches itself literally.
std::string regex_escape(const std::string& s);

std::vector<uint32_t> decode_utf8(const std::string& s);
void append_utf8(std::string& out, uint32_t cp);

}  // namespace jsalg

#endif  // JSALG_PATTERNS_HPP
