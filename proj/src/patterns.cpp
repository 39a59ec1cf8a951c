#include "patterns.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace jsalg {

namespace {
constexpr uint32_t kMaxCp = 0x10FFFF;
constexpr size_t kMaxDfaStates = 20000;
constexpr size_t kMaxNfaStates = 200000;
constexpr int kMaxRepeat = 512;
}  // namespace

// ---------------------------------------------------------------------------
// CharSet

CharSet CharSet::all() { return CharSet{{{0, kMaxCp}}}; }

bool CharSet::contains(uint32_t cp) const {
  for (const auto& [lo, hi] : ranges) {
    if (cp < lo) return false;
    if (cp <= hi) return true;
  }
  return false;
}

void CharSet::add(uint32_t lo, uint32_t hi) {
  if (lo > hi) return;
  ranges.emplace_back(lo, hi);
}

void CharSet::normalize() {
  std::sort(ranges.begin(), ranges.end());
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (const auto& r : ranges) {
    if (!out.empty() && r.first <= out.back().second + 1 &&
        out.back().second + 1 != 0) {
      out.back().second = std::max(out.back().second, r.second);
    } else {
      out.push_back(r);
    }
  }
  ranges = std::move(out);
}

CharSet CharSet::negated() const {
  CharSet out;
  uint32_t next = 0;
  for (const auto& [lo, hi] : ranges) {
    if (lo > next) out.add(next, lo - 1);
    next = hi + 1;
    if (next == 0) return out;  // hi was the max uint32
  }
  if (next <= kMaxCp) out.add(next, kMaxCp);
  return out;
}

CharSet CharSet::unioned(const CharSet& other) const {
  CharSet out = *this;
  for (const auto& r : other.ranges) out.ranges.push_back(r);
  out.normalize();
  return out;
}

// ---------------------------------------------------------------------------
// UTF-8

std::vector<uint32_t> decode_utf8(const std::string& s) {
  std::vector<uint32_t> out;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    uint32_t cp;
    size_t extra;
    if (c < 0x80) { cp = c; extra = 0; }
    else if ((c & 0xE0) == 0xC0) { cp = c & 0x1F; extra = 1; }
    else if ((c & 0xF0) == 0xE0) { cp = c & 0x0F; extra = 2; }
    else if ((c & 0xF8) == 0xF0) { cp = c & 0x07; extra = 3; }
    else { out.push_back(c); ++i; continue; }  // lenient: raw byte
    if (i + extra >= s.size()) { out.push_back(c); ++i; continue; }
    bool ok = true;
    uint32_t acc = cp;
    for (size_t k = 1; k <= extra; ++k) {
      unsigned char cc = s[i + k];
      if ((cc & 0xC0) != 0x80) { ok = false; break; }
      acc = (acc << 6) | (cc & 0x3F);
    }
    if (!ok) { out.push_back(c); ++i; continue; }
    out.push_back(acc);
    i += extra + 1;
  }
  return out;
}

void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(char(cp));
  } else if (cp < 0x800) {
    out.push_back(char(0xC0 | (cp >> 6)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(char(0xE0 | (cp >> 12)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(char(0xF0 | (cp >> 18)));
    out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  }
}

// ---------------------------------------------------------------------------
// Regex AST and parser

namespace {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum Kind { EmptySet, Eps, Class, Cat, Alt, Star, Rep, Caret, Dollar } kind;
  CharSet set;                 // Class
  std::vector<NodePtr> kids;   // Cat, Alt, Star(1), Rep(1)
  int lo = 0, hi = -1;         // Rep; hi == -1 means unbounded
};

NodePtr mk(Node::Kind k) {
  auto n = std::make_shared<Node>();
  const_cast<Node&>(*n).kind = k;
  return n;
}
NodePtr mk_class(CharSet s) {
  auto n = std::make_shared<Node>();
  auto& m = const_cast<Node&>(*n);
  m.kind = Node::Class;
  m.set = std::move(s);
  return n;
}

[[noreturn]] void syntax_error(const std::string& msg) {
  throw PatternError(PatternError::Kind::Syntax, "regex syntax error: " + msg);
}
[[noreturn]] void unsupported(const std::string& msg) {
  throw PatternError(PatternError::Kind::Unsupported,
                     "unsupported regex construct: " + msg);
}

CharSet digit_set() { CharSet s; s.add('0', '9'); return s; }
CharSet word_set() {
  CharSet s;
  s.add('0', '9'); s.add('A', 'Z'); s.add('a', 'z'); s.add('_', '_');
  s.normalize();
  return s;
}
CharSet space_set() {
  CharSet s;
  s.add(0x9, 0xD); s.add(' ', ' '); s.add(0xA0, 0xA0); s.add(0x1680, 0x1680);
  s.add(0x2000, 0x200A); s.add(0x2028, 0x2029); s.add(0x202F, 0x202F);
  s.add(0x205F, 0x205F); s.add(0x3000, 0x3000); s.add(0xFEFF, 0xFEFF);
  s.normalize();
  return s;
}
CharSet dot_set() {
  // ECMA '.': any char except line terminators.
  CharSet lt;
  lt.add('\n', '\n'); lt.add('\r', '\r'); lt.add(0x2028, 0x2029);
  lt.normalize();
  return lt.negated();
}

class Parser {
 public:
  explicit Parser(const std::string& src) : cps_(decode_utf8(src)) {}

  NodePtr parse() {
    NodePtr n = parse_alt();
    if (pos_ != cps_.size()) syntax_error("unbalanced ')'");
    return n;
  }

 private:
  std::vector<uint32_t> cps_;
  size_t pos_ = 0;

  bool eof() const { return pos_ >= cps_.size(); }
  uint32_t peek() const { return cps_[pos_]; }
  uint32_t take() { return cps_[pos_++]; }
  bool eat(uint32_t c) {
    if (!eof() && peek() == c) { ++pos_; return true; }
    return false;
  }

  NodePtr parse_alt() {
    std::vector<NodePtr> alts{parse_cat()};
    while (eat('|')) alts.push_back(parse_cat());
    if (alts.size() == 1) return alts[0];
    auto n = mk(Node::Alt);
    const_cast<Node&>(*n).kids = std::move(alts);
    return n;
  }

  NodePtr parse_cat() {
    std::vector<NodePtr> kids;
    while (!eof() && peek() != '|' && peek() != ')') {
      kids.push_back(parse_rep());
    }
    if (kids.empty()) return mk(Node::Eps);
    if (kids.size() == 1) return kids[0];
    auto n = mk(Node::Cat);
    const_cast<Node&>(*n).kids = std::move(kids);
    return n;
  }

  NodePtr parse_rep() {
    NodePtr atom = parse_atom();
    for (;;) {
      int lo, hi;
      if (eat('*')) { lo = 0; hi = -1; }
      else if (eat('+')) { lo = 1; hi = -1; }
      else if (eat('?')) { lo = 0; hi = 1; }
      else if (!eof() && peek() == '{') {
        size_t save = pos_;
        if (!parse_braces(lo, hi)) { pos_ = save; break; }
      } else {
        break;
      }
      eat('?');  // lazy quantifier: same language
      auto n = mk(Node::Rep);
      auto& m = const_cast<Node&>(*n);
      m.kids = {atom};
      m.lo = lo;
      m.hi = hi;
      atom = n;
    }
    return atom;
  }

  // Returns false (caller treats '{' as a literal) if not a valid quantifier.
  bool parse_braces(int& lo, int& hi) {
    ++pos_;  // '{'
    long a = parse_int();
    if (a < 0) return false;
    if (eat('}')) { lo = hi = int(a); return check_rep(lo, hi); }
    if (!eat(',')) return false;
    if (eat('}')) { lo = int(a); hi = -1; return check_rep(lo, lo); }
    long b = parse_int();
    if (b < 0 || !eat('}')) return false;
    if (b < a) syntax_error("repetition with max < min");
    lo = int(a); hi = int(b);
    return check_rep(lo, hi);
  }
  bool check_rep(int lo, int hi) {
    if (lo > kMaxRepeat || hi > kMaxRepeat) {
      unsupported("repetition count above " + std::to_string(kMaxRepeat));
    }
    return true;
  }
  long parse_int() {
    if (eof() || peek() < '0' || peek() > '9') return -1;
    long v = 0;
    while (!eof() && peek() >= '0' && peek() <= '9') {
      v = v * 10 + long(take() - '0');
      if (v > 1000000) syntax_error("repetition count overflow");
    }
    return v;
  }

  NodePtr parse_atom() {
    if (eof()) syntax_error("dangling quantifier or empty atom");
    uint32_t c = take();
    switch (c) {
      case '^': return mk(Node::Caret);
      case '$': return mk(Node::Dollar);
      case '.': return mk_class(dot_set());
      case '(': {
        if (eat('?')) {
          if (eat(':')) {
            // non-capturing
          } else if (!eof() && (peek() == '=' || peek() == '!')) {
            unsupported("lookahead");
          } else if (!eof() && peek() == '<') {
            // could be lookbehind or a named group
            size_t save = pos_;
            ++pos_;
            if (!eof() && (peek() == '=' || peek() == '!')) {
              unsupported("lookbehind");
            }
            // named capture group (?<name>...): treat as plain group
            while (!eof() && peek() != '>') ++pos_;
            if (!eat('>')) { pos_ = save; syntax_error("bad group"); }
          } else {
            unsupported("(?...) group");
          }
        }
        NodePtr inner = parse_alt();
        if (!eat(')')) syntax_error("missing ')'");
        return inner;
      }
      case '[': return parse_class();
      case '\\': return parse_escape_atom();
      case '*': case '+': case '?':
        syntax_error("quantifier with nothing to repeat");
      case ')': syntax_error("unbalanced ')'");
      default: return mk_class(CharSet::single(c));
    }
  }

  NodePtr parse_escape_atom() {
    CharSet s = parse_escape(false);
    return mk_class(std::move(s));
  }

  // One escape sequence after '\'; in_class affects \b (backspace in class).
  CharSet parse_escape(bool in_class) {
    if (eof()) syntax_error("trailing backslash");
    uint32_t c = take();
    switch (c) {
      case 'd': return digit_set();
      case 'D': return digit_set().negated();
      case 'w': return word_set();
      case 'W': return word_set().negated();
      case 's': return space_set();
      case 'S': return space_set().negated();
      case 'n': return CharSet::single('\n');
      case 'r': return CharSet::single('\r');
      case 't': return CharSet::single('\t');
      case 'f': return CharSet::single('\f');
      case 'v': return CharSet::single(0xB);
      case '0': return CharSet::single(0);
      case 'b':
        if (in_class) return CharSet::single(0x8);
        unsupported("word-boundary assertion \\b");
      case 'B': unsupported("word-boundary assertion \\B");
      case 'k': unsupported("back-reference \\k");
      case 'x': {
        uint32_t v = parse_hex(2);
        return CharSet::single(v);
      }
      case 'u': {
        if (!eof() && peek() == '{') {
          ++pos_;
          uint32_t v = 0;
          int n = 0;
          while (!eof() && peek() != '}') {
            v = v * 16 + hex_digit(take());
            if (++n > 6) syntax_error("\\u{...} too long");
          }
          if (!eat('}') || n == 0 || v > kMaxCp) syntax_error("bad \\u{...}");
          return CharSet::single(v);
        }
        return CharSet::single(parse_hex(4));
      }
      case 'c': {
        if (eof()) syntax_error("bad \\c");
        uint32_t l = take();
        return CharSet::single(l % 32);
      }
      case 'p': case 'P': unsupported("unicode property escape \\p");
      default:
        if (c >= '1' && c <= '9') unsupported("back-reference");
        return CharSet::single(c);
    }
  }

  uint32_t hex_digit(uint32_t c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    syntax_error("bad hex digit");
  }
  uint32_t parse_hex(int n) {
    uint32_t v = 0;
    for (int i = 0; i < n; ++i) {
      if (eof()) syntax_error("bad hex escape");
      v = v * 16 + hex_digit(take());
    }
    return v;
  }

  NodePtr parse_class() {
    bool neg = eat('^');
    CharSet acc;
    bool first = true;
    while (true) {
      if (eof()) syntax_error("missing ']'");
      if (peek() == ']' && !first) break;
      if (peek() == ']' && first) {
        // "[]" = empty class, "[^]" = any char
        ++pos_;
        if (neg) return mk_class(CharSet::all());
        return mk(Node::EmptySet);
      }
      first = false;
      CharSet item = parse_class_item();
      // range a-b ?
      if (!eof() && peek() == '-' && pos_ + 1 < cps_.size() &&
          cps_[pos_ + 1] != ']' && item.ranges.size() == 1 &&
          item.ranges[0].first == item.ranges[0].second) {
        ++pos_;  // '-'
        CharSet rhs = parse_class_item();
        if (rhs.ranges.size() == 1 && rhs.ranges[0].first == rhs.ranges[0].second) {
          uint32_t lo = item.ranges[0].first, hi = rhs.ranges[0].first;
          if (lo > hi) syntax_error("class range out of order");
          acc.add(lo, hi);
          continue;
        }
        // e.g. [a-\d]: treat '-' as literal
        acc = acc.unioned(item);
        acc.add('-', '-');
        acc = acc.unioned(rhs);
        continue;
      }
      acc = acc.unioned(item);
    }
    ++pos_;  // ']'
    acc.normalize();
    return mk_class(neg ? acc.negated() : acc);
  }

  CharSet parse_class_item() {
    uint32_t c = take();
    if (c == '\\') return parse_escape(true);
    return CharSet::single(c);
  }
};

// ---------------------------------------------------------------------------
// NFA

struct Nfa {
  struct Edge {
    enum Kind { Range, Eps, Caret, Dollar } kind;
    int to;
    CharSet set;  // Range only
  };
  std::vector<std::vector<Edge>> adj;
  int start = 0, accept = 0;

  int add_state() {
    if (adj.size() >= kMaxNfaStates) {
      throw PatternError(PatternError::Kind::LimitExceeded,
                         "pattern too large (NFA state limit)");
    }
    adj.emplace_back();
    return int(adj.size()) - 1;
  }
  void eps(int a, int b) { adj[a].push_back({Edge::Eps, b, {}}); }
  void edge(int a, int b, Nfa::Edge::Kind k, CharSet s = {}) {
    adj[a].push_back({k, b, std::move(s)});
  }
};

// Builds fragment (entry, exit) for node.
std::pair<int, int> build_nfa(Nfa& n, const NodePtr& node) {
  switch (node->kind) {
    case Node::EmptySet: {
      int s = n.add_state(), t = n.add_state();
      return {s, t};  // no edge: empty language
    }
    case Node::Eps: {
      int s = n.add_state(), t = n.add_state();
      n.eps(s, t);
      return {s, t};
    }
    case Node::Class: {
      int s = n.add_state(), t = n.add_state();
      if (!node->set.empty()) n.edge(s, t, Nfa::Edge::Range, node->set);
      return {s, t};
    }
    case Node::Caret: {
      int s = n.add_state(), t = n.add_state();
      n.edge(s, t, Nfa::Edge::Caret);
      return {s, t};
    }
    case Node::Dollar: {
      int s = n.add_state(), t = n.add_state();
      n.edge(s, t, Nfa::Edge::Dollar);
      return {s, t};
    }
    case Node::Cat: {
      std::pair<int, int> acc = build_nfa(n, node->kids[0]);
      for (size_t i = 1; i < node->kids.size(); ++i) {
        auto frag = build_nfa(n, node->kids[i]);
        n.eps(acc.second, frag.first);
        acc.second = frag.second;
      }
      return acc;
    }
    case Node::Alt: {
      int s = n.add_state(), t = n.add_state();
      for (const auto& kid : node->kids) {
        auto frag = build_nfa(n, kid);
        n.eps(s, frag.first);
        n.eps(frag.second, t);
      }
      return {s, t};
    }
    case Node::Star: {
      int s = n.add_state(), t = n.add_state();
      auto frag = build_nfa(n, node->kids[0]);
      n.eps(s, t);
      n.eps(s, frag.first);
      n.eps(frag.second, frag.first);
      n.eps(frag.second, t);
      return {s, t};
    }
    case Node::Rep: {
      int lo = node->lo, hi = node->hi;
      int s = n.add_state();
      int cur = s;
      for (int i = 0; i < lo; ++i) {
        auto frag = build_nfa(n, node->kids[0]);
        n.eps(cur, frag.first);
        cur = frag.second;
      }
      if (hi < 0) {
        // star of the body
        int t = n.add_state();
        auto frag = build_nfa(n, node->kids[0]);
        n.eps(cur, t);
        n.eps(cur, frag.first);
        n.eps(frag.second, frag.first);
        n.eps(frag.second, t);
        return {s, t};
      }
      int t = n.add_state();
      n.eps(cur, t);
      for (int i = lo; i < hi; ++i) {
        auto frag = build_nfa(n, node->kids[0]);
        n.eps(cur, frag.first);
        cur = frag.second;
        n.eps(cur, t);
      }
      return {s, t};
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Subset construction with guarded anchor edges.
//
// Search semantics: a prefix-skip loop feeds the pattern entry and a
// suffix-skip loop follows the pattern exit.  Caret edges may only be crossed
// in the initial closure (position 0); dollar edges only in the acceptance
// closure (end of input).

std::vector<int> closure(const Nfa& n, std::vector<int> set, bool allow_caret,
                         bool allow_dollar) {
  std::vector<char> in(n.adj.size(), 0);
  std::deque<int> work;
  for (int q : set) {
    if (!in[q]) { in[q] = 1; work.push_back(q); }
  }
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (const auto& e : n.adj[q]) {
      bool cross = e.kind == Nfa::Edge::Eps ||
                   (e.kind == Nfa::Edge::Caret && allow_caret) ||
                   (e.kind == Nfa::Edge::Dollar && allow_dollar);
      if (cross && !in[e.to]) {
        in[e.to] = 1;
        work.push_back(e.to);
      }
    }
  }
  std::vector<int> out;
  for (size_t i = 0; i < in.size(); ++i) {
    if (in[i]) out.push_back(int(i));
  }
  return out;
}

CompiledDfa determinize(const Nfa& n) {
  // Alphabet partition from all range edges.
  std::set<uint32_t> cutset{0, kMaxCp + 1};
  for (const auto& edges : n.adj) {
    for (const auto& e : edges) {
      if (e.kind == Nfa::Edge::Range) {
        for (const auto& [lo, hi] : e.set.ranges) {
          cutset.insert(lo);
          if (hi + 1 != 0) cutset.insert(hi + 1);
        }
      }
    }
  }
  CompiledDfa d;
  d.cuts.assign(cutset.begin(), cutset.end());
  while (d.cuts.back() > kMaxCp + 1) d.cuts.pop_back();
  if (d.cuts.back() != kMaxCp + 1) d.cuts.push_back(kMaxCp + 1);
  size_t nclasses = d.num_classes();

  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> sets;
  auto intern = [&](std::vector<int> s) {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    int id = int(sets.size());
    if (sets.size() >= kMaxDfaStates) {
      throw PatternError(PatternError::Kind::LimitExceeded,
                         "pattern too large (DFA state limit)");
    }
    ids.emplace(s, id);
    sets.push_back(std::move(s));
    d.trans.emplace_back(nclasses, -1);
    d.accepting.push_back(0);
    return id;
  };

  d.start = intern(closure(n, {n.start}, /*caret=*/true, /*dollar=*/false));
  for (size_t id = 0; id < sets.size(); ++id) {
    std::vector<int> cur = sets[id];
    // acceptance via dollar closure
    std::vector<int> acc = closure(n, cur, false, true);
    d.accepting[id] =
        std::binary_search(acc.begin(), acc.end(), n.accept) ? 1 : 0;
    for (size_t c = 0; c < nclasses; ++c) {
      uint32_t rep = d.cuts[c];
      std::vector<int> moved;
      for (int q : cur) {
        for (const auto& e : n.adj[q]) {
          if (e.kind == Nfa::Edge::Range && e.set.contains(rep)) {
            moved.push_back(e.to);
          }
        }
      }
      std::sort(moved.begin(), moved.end());
      moved.erase(std::unique(moved.begin(), moved.end()), moved.end());
      d.trans[id][c] = intern(closure(n, std::move(moved), false, false));
    }
  }
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// DFA operations

int CompiledDfa::class_of(uint32_t cp) const {
  auto it = std::upper_bound(cuts.begin(), cuts.end(), cp);
  return int(it - cuts.begin()) - 1;
}

bool CompiledDfa::matches(const std::string& utf8) const {
  int q = start;
  for (uint32_t cp : decode_utf8(utf8)) {
    q = trans[q][size_t(class_of(cp))];
  }
  return accepting[q] != 0;
}

CompiledDfa complement(const CompiledDfa& d) {
  CompiledDfa out = d;
  for (auto& a : out.accepting) a = a ? 0 : 1;
  return out;
}

namespace {

CompiledDfa product(const CompiledDfa& a, const CompiledDfa& b, bool is_and) {
  CompiledDfa out;
  std::set<uint32_t> cutset(a.cuts.begin(), a.cuts.end());
  cutset.insert(b.cuts.begin(), b.cuts.end());
  out.cuts.assign(cutset.begin(), cutset.end());
  size_t nc = out.num_classes();
  // class -> class in a / b
  std::vector<int> ca(nc), cb(nc);
  for (size_t c = 0; c < nc; ++c) {
    ca[c] = a.class_of(out.cuts[c]);
    cb[c] = b.class_of(out.cuts[c]);
  }
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](std::pair<int, int> p) {
    auto it = ids.find(p);
    if (it != ids.end()) return it->second;
    int id = int(pairs.size());
    if (pairs.size() >= kMaxDfaStates) {
      throw PatternError(PatternError::Kind::LimitExceeded,
                         "pattern too large (product DFA limit)");
    }
    ids.emplace(p, id);
    pairs.push_back(p);
    out.trans.emplace_back(nc, -1);
    bool acc_a = a.accepting[p.first] != 0;
    bool acc_b = b.accepting[p.second] != 0;
    out.accepting.push_back((is_and ? (acc_a && acc_b) : (acc_a || acc_b)) ? 1
                                                                           : 0);
    return id;
  };
  out.start = intern({a.start, b.start});
  for (size_t id = 0; id < pairs.size(); ++id) {
    auto [qa, qb] = pairs[id];
    for (size_t c = 0; c < nc; ++c) {
      out.trans[id][c] = intern({a.trans[qa][size_t(ca[c])],
                                 b.trans[qb][size_t(cb[c])]});
    }
  }
  return out;
}

}  // namespace

CompiledDfa intersect(const CompiledDfa& a, const CompiledDfa& b) {
  return product(a, b, true);
}
CompiledDfa dfa_union(const CompiledDfa& a, const CompiledDfa& b) {
  return product(a, b, false);
}

bool is_empty(const CompiledDfa& d) {
  std::vector<char> seen(d.trans.size(), 0);
  std::deque<int> work{d.start};
  seen[d.start] = 1;
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    if (d.accepting[q]) return false;
    for (int to : d.trans[q]) {
      if (!seen[to]) { seen[to] = 1; work.push_back(to); }
    }
  }
  return true;
}

bool equivalent(const CompiledDfa& a, const CompiledDfa& b) {
  return is_empty(intersect(a, complement(b))) &&
         is_empty(intersect(b, complement(a)));
}

CompiledDfa minimize(const CompiledDfa& d) {
  size_t n = d.trans.size(), nc = d.num_classes();
  // reachable states
  std::vector<char> reach(n, 0);
  std::deque<int> work{d.start};
  reach[d.start] = 1;
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int to : d.trans[q]) {
      if (!reach[to]) { reach[to] = 1; work.push_back(to); }
    }
  }
  // Moore partition refinement
  std::vector<int> block(n, -1);
  for (size_t q = 0; q < n; ++q) {
    if (reach[q]) block[q] = d.accepting[q] ? 1 : 0;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::vector<int>, int> sig_ids;
    std::vector<int> nb(n, -1);
    for (size_t q = 0; q < n; ++q) {
      if (!reach[q]) continue;
      std::vector<int> sig;
      sig.reserve(nc + 1);
      sig.push_back(block[q]);
      for (size_t c = 0; c < nc; ++c) sig.push_back(block[size_t(d.trans[q][c])]);
      auto [it, inserted] = sig_ids.emplace(std::move(sig), int(sig_ids.size()));
      nb[q] = it->second;
    }
    // count change
    std::set<int> old_blocks, new_blocks;
    for (size_t q = 0; q < n; ++q) {
      if (reach[q]) { old_blocks.insert(block[q]); new_blocks.insert(nb[q]); }
    }
    if (new_blocks.size() != old_blocks.size()) changed = true;
    block = std::move(nb);
  }
  // rebuild
  int nblocks = 0;
  std::map<int, int> remap;
  for (size_t q = 0; q < n; ++q) {
    if (reach[q] && !remap.count(block[q])) remap[block[q]] = nblocks++;
  }
  CompiledDfa out;
  out.cuts = d.cuts;
  out.trans.assign(size_t(nblocks), std::vector<int>(nc, -1));
  out.accepting.assign(size_t(nblocks), 0);
  for (size_t q = 0; q < n; ++q) {
    if (!reach[q]) continue;
    int b = remap[block[q]];
    out.accepting[size_t(b)] = d.accepting[q];
    for (size_t c = 0; c < nc; ++c) {
      out.trans[size_t(b)][c] = remap[block[size_t(d.trans[q][c])]];
    }
  }
  out.start = remap[block[size_t(d.start)]];
  // merge adjacent alphabet classes with identical transition columns
  std::vector<uint32_t> new_cuts{out.cuts[0]};
  std::vector<size_t> keep{0};
  for (size_t c = 1; c < nc; ++c) {
    bool same = true;
    for (size_t q = 0; q < out.trans.size() && same; ++q) {
      same = out.trans[q][c] == out.trans[q][keep.back()];
    }
    if (!same) {
      new_cuts.push_back(out.cuts[c]);
      keep.push_back(c);
    }
  }
  new_cuts.push_back(out.cuts.back());
  if (keep.size() != nc) {
    std::vector<std::vector<int>> nt(out.trans.size());
    for (size_t q = 0; q < out.trans.size(); ++q) {
      nt[q].reserve(keep.size());
      for (size_t c : keep) nt[q].push_back(out.trans[q][c]);
    }
    out.trans = std::move(nt);
    out.cuts = std::move(new_cuts);
  }
  return out;
}

namespace {

// States from which an accepting state is reachable.
std::vector<char> coreachable(const CompiledDfa& d) {
  size_t n = d.trans.size();
  std::vector<std::vector<int>> rev(n);
  for (size_t q = 0; q < n; ++q) {
    for (int to : d.trans[q]) rev[size_t(to)].push_back(int(q));
  }
  std::vector<char> co(n, 0);
  std::deque<int> work;
  for (size_t q = 0; q < n; ++q) {
    if (d.accepting[q]) { co[q] = 1; work.push_back(int(q)); }
  }
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int p : rev[size_t(q)]) {
      if (!co[size_t(p)]) { co[size_t(p)] = 1; work.push_back(p); }
    }
  }
  return co;
}

std::vector<char> reachable(const CompiledDfa& d) {
  std::vector<char> seen(d.trans.size(), 0);
  std::deque<int> work{d.start};
  seen[size_t(d.start)] = 1;
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int to : d.trans[size_t(q)]) {
      if (!seen[size_t(to)]) { seen[size_t(to)] = 1; work.push_back(to); }
    }
  }
  return seen;
}

}  // namespace

bool is_finite(const CompiledDfa& d) {
  // Finite iff the trimmed graph (reachable and co-reachable states) is a
  // DAG, decided by Kahn topological sort over trimmed edges.
  auto live = reachable(d);
  auto co = coreachable(d);
  size_t n = d.trans.size();
  auto in_trim = [&](int q) { return live[size_t(q)] && co[size_t(q)]; };
  std::vector<int> indeg(n, 0);
  size_t trimmed = 0;
  for (size_t q = 0; q < n; ++q) {
    if (!in_trim(int(q))) continue;
    ++trimmed;
    for (int to : d.trans[q]) {
      if (in_trim(to)) ++indeg[size_t(to)];
    }
  }
  std::deque<int> work;
  for (size_t q = 0; q < n; ++q) {
    if (in_trim(int(q)) && indeg[q] == 0) work.push_back(int(q));
  }
  size_t removed = 0;
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    ++removed;
    for (int to : d.trans[size_t(q)]) {
      if (in_trim(to) && --indeg[size_t(to)] == 0) work.push_back(to);
    }
  }
  return removed == trimmed;
}

namespace {

// Code points of a class, printable ASCII first.
std::vector<uint32_t> class_reps(const CompiledDfa& d, size_t c, size_t want) {
  uint32_t lo = d.cuts[c], hi = d.cuts[c + 1] - 1;
  std::vector<uint32_t> out;
  for (uint32_t cp = std::max<uint32_t>(lo, 0x20);
       cp <= std::min<uint32_t>(hi, 0x7E) && out.size() < want; ++cp) {
    out.push_back(cp);
  }
  for (uint32_t cp = lo; cp <= hi && out.size() < want; ++cp) {
    if (cp < 0x20 || cp > 0x7E) out.push_back(cp);
    if (cp == hi) break;  // overflow guard
  }
  return out;
}

}  // namespace

std::vector<std::string> enumerate_language(const CompiledDfa& d,
                                            size_t limit) {
  auto co = coreachable(d);
  std::vector<std::string> out;
  std::deque<std::pair<int, std::string>> work;
  if (co[size_t(d.start)]) work.emplace_back(d.start, "");
  size_t steps = 0;
  while (!work.empty()) {
    auto [q, s] = std::move(work.front());
    work.pop_front();
    if (d.accepting[size_t(q)]) {
      out.push_back(s);
      if (out.size() > limit) {
        throw PatternError(PatternError::Kind::LimitExceeded,
                           "language larger than enumeration limit");
      }
    }
    if (++steps > 2000000 || work.size() > 1000000) {
      throw PatternError(PatternError::Kind::LimitExceeded,
                         "enumeration exceeded work limit");
    }
    for (size_t c = 0; c < d.num_classes(); ++c) {
      int to = d.trans[size_t(q)][c];
      if (!co[size_t(to)]) continue;
      for (uint32_t cp : class_reps(d, c, limit + 1)) {
        std::string next = s;
        append_utf8(next, cp);
        work.emplace_back(to, std::move(next));
      }
    }
  }
  return out;
}

std::optional<std::string> shortest_witness(const CompiledDfa& d) {
  std::vector<char> seen(d.trans.size(), 0);
  std::deque<std::pair<int, std::string>> work{{d.start, ""}};
  seen[size_t(d.start)] = 1;
  while (!work.empty()) {
    auto [q, s] = std::move(work.front());
    work.pop_front();
    if (d.accepting[size_t(q)]) return s;
    for (size_t c = 0; c < d.num_classes(); ++c) {
      int to = d.trans[size_t(q)][c];
      if (seen[size_t(to)]) continue;
      seen[size_t(to)] = 1;
      std::string next = s;
      append_utf8(next, class_reps(d, c, 1)[0]);
      work.emplace_back(to, std::move(next));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// DFA -> regex (state elimination)

namespace {

std::string escape_cp(uint32_t cp, bool in_class) {
  static const std::string meta = "\\^$.|?*+()[]{}";
  static const std::string class_meta = "\\]^-";
  if (cp >= 0x20 && cp <= 0x7E) {
    char c = char(cp);
    const std::string& m = in_class ? class_meta : meta;
    if (m.find(c) != std::string::npos) return std::string("\\") + c;
    return std::string(1, c);
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "\\u{%x}", cp);
  return buf;
}

std::string class_regex(const CharSet& s) {
  if (s.empty()) return "[]";
  if (s.ranges.size() == 1 && s.ranges[0].first == 0 &&
      s.ranges[0].second == kMaxCp) {
    return "[^]";
  }
  if (s.ranges.size() == 1 && s.ranges[0].first == s.ranges[0].second) {
    return escape_cp(s.ranges[0].first, false);
  }
  CharSet neg = s.negated();
  bool use_neg = neg.ranges.size() < s.ranges.size();
  const CharSet& body = use_neg ? neg : s;
  std::string out = use_neg ? "[^" : "[";
  for (const auto& [lo, hi] : body.ranges) {
    if (lo == hi) {
      out += escape_cp(lo, true);
    } else {
      out += escape_cp(lo, true) + "-" + escape_cp(hi, true);
    }
  }
  out += "]";
  return out;
}

const std::string kEps = "(?:)";

// True if s parses as a single regex atom (safe to quantify/concatenate
// without extra grouping).
bool is_atomic(const std::string& s) {
  if (s.empty()) return false;
  size_t i = 0;
  size_t n = s.size();
  if (s[0] == '\\') {
    // escape; \u{...} needs the braces consumed
    if (n >= 2 && s[1] == 'u' && n >= 3 && s[2] == '{') {
      i = s.find('}');
      return i != std::string::npos && i == n - 1;
    }
    if (n >= 2 && (s[1] == 'x')) return n == 4;
    if (n >= 2 && (s[1] == 'u')) return n == 6;
    return n == 2;
  }
  if (s[0] == '[') {
    for (i = 1; i < n; ++i) {
      if (s[i] == '\\') { ++i; continue; }
      if (s[i] == ']') return i == n - 1;
    }
    return false;
  }
  if (s[0] == '(') {
    int depth = 0;
    for (i = 0; i < n; ++i) {
      if (s[i] == '\\') { ++i; continue; }
      if (s[i] == '(') ++depth;
      else if (s[i] == ')') {
        --depth;
        if (depth == 0) return i == n - 1;
      }
    }
    return false;
  }
  return n == 1 && std::string("^$.|?*+(){}").find(s[0]) == std::string::npos;
}

std::string wrap(const std::string& s) {
  if (is_atomic(s)) return s;
  return "(?:" + s + ")";
}

std::string cat_re(const std::string& a, const std::string& b) {
  if (a == kEps) return b;
  if (b == kEps) return a;
  return wrap(a) + wrap(b);
}

std::string alt_re(const std::string& a, const std::string& b) {
  if (a == b) return a;
  if (a == kEps) return wrap(b) + "?";
  if (b == kEps) return wrap(a) + "?";
  return a + "|" + b;
}

std::string star_re(const std::string& a) {
  if (a == kEps) return kEps;
  return wrap(a) + "*";
}

}  // namespace

std::string dfa_to_regex(const CompiledDfa& d0) {
  CompiledDfa d = minimize(d0);
  if (is_empty(d)) return "[]";
  int n = int(d.trans.size());
  int S = n, F = n + 1;
  std::map<std::pair<int, int>, std::string> lab;
  auto add = [&](int i, int j, const std::string& re) {
    auto it = lab.find({i, j});
    if (it == lab.end()) {
      lab[{i, j}] = re;
    } else {
      it->second = alt_re(it->second, re);
    }
  };
  auto co = coreachable(d);
  for (int q = 0; q < n; ++q) {
    for (int j = 0; j < n; ++j) {
      if (!co[size_t(j)]) continue;
      CharSet s;
      for (size_t c = 0; c < d.num_classes(); ++c) {
        if (d.trans[size_t(q)][c] == j) {
          s.add(d.cuts[c], d.cuts[c + 1] - 1);
        }
      }
      s.normalize();
      if (!s.empty()) add(q, j, class_regex(s));
    }
  }
  add(S, d.start, kEps);
  for (int q = 0; q < n; ++q) {
    if (d.accepting[size_t(q)]) add(q, F, kEps);
  }
  for (int k = 0; k < n; ++k) {
    std::string self;
    bool has_self = false;
    if (auto it = lab.find({k, k}); it != lab.end()) {
      self = it->second;
      has_self = true;
      lab.erase(it);
    }
    std::string loop = has_self ? star_re(self) : kEps;
    std::vector<std::pair<int, std::string>> ins, outs;
    for (auto it = lab.begin(); it != lab.end();) {
      if (it->first.second == k) {
        ins.emplace_back(it->first.first, it->second);
        it = lab.erase(it);
      } else if (it->first.first == k) {
        outs.emplace_back(it->first.second, it->second);
        it = lab.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& [i, rin] : ins) {
      for (const auto& [j, rout] : outs) {
        add(i, j, cat_re(cat_re(rin, loop), rout));
      }
    }
  }
  auto it = lab.find({S, F});
  if (it == lab.end()) return "[]";
  if (it->second == kEps) return "^$";
  return "^(?:" + it->second + ")$";
}

// ---------------------------------------------------------------------------
// Pattern

PatternPtr Pattern::parse(const std::string& source) {
  Parser p(source);
  NodePtr ast = p.parse();
  Nfa nfa;
  auto frag = build_nfa(nfa, ast);
  // search wrapper
  int q0 = nfa.add_state();
  int qa = nfa.add_state();
  nfa.edge(q0, q0, Nfa::Edge::Range, CharSet::all());
  nfa.eps(q0, frag.first);
  nfa.eps(frag.second, qa);
  nfa.edge(qa, qa, Nfa::Edge::Range, CharSet::all());
  nfa.start = q0;
  nfa.accept = qa;
  CompiledDfa d = minimize(determinize(nfa));
  return std::make_shared<Pattern>(source, std::move(d), std::nullopt);
}

std::string regex_escape(const std::string& s) {
  std::string out;
  for (uint32_t cp : decode_utf8(s)) {
    if (cp >= 0x80) {
      append_utf8(out, cp);
    } else {
      out += escape_cp(cp, false);
    }
  }
  return out;
}

PatternPtr Pattern::literal(const std::string& k) {
  std::string src = "^" + regex_escape(k) + "$";
  PatternPtr base = parse(src);
  return std::make_shared<Pattern>(base->source(), base->dfa(), k);
}

PatternPtr Pattern::any() {
  static const PatternPtr p = parse(".*");
  return p;
}

PatternPtr Pattern::none() {
  static const PatternPtr p = parse("[]");
  return p;
}

PatternPtr Pattern::complement(const PatternPtr& p) {
  CompiledDfa d = minimize(jsalg::complement(p->dfa()));
  std::string src = dfa_to_regex(d);
  return std::make_shared<Pattern>(std::move(src), std::move(d), std::nullopt);
}

PatternPtr Pattern::intersect(const PatternPtr& a, const PatternPtr& b) {
  CompiledDfa d = minimize(jsalg::intersect(a->dfa(), b->dfa()));
  std::string src = dfa_to_regex(d);
  return std::make_shared<Pattern>(std::move(src), std::move(d), std::nullopt);
}

PatternPtr Pattern::alt(const PatternPtr& a, const PatternPtr& b) {
  CompiledDfa d = minimize(dfa_union(a->dfa(), b->dfa()));
  // Keep a readable source for the common case.
  std::string src = "(?:" + a->source() + ")|(?:" + b->source() + ")";
  return std::make_shared<Pattern>(std::move(src), std::move(d), std::nullopt);
}

}  // namespace jsalg
