#include "rexinfer/regex.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <utility>

#include "rexinfer/error.h"

namespace rexinfer {

std::string Symbol::str() const {
  if (index == 0) return name;
  return name + "#" + std::to_string(index);
}

struct Regex::Node {
  RegexKind kind = RegexKind::kEmptySet;
  Symbol symbol;
  std::vector<Regex> children;
};

Regex::Regex() : Regex(empty_set()) {}

Regex Regex::empty_set() {
  static const auto node = [] {
    auto n = std::make_shared<Node>();
    n->kind = RegexKind::kEmptySet;
    return std::shared_ptr<const Node>(n);
  }();
  return Regex(node);
}

Regex Regex::epsilon() {
  static const auto node = [] {
    auto n = std::make_shared<Node>();
    n->kind = RegexKind::kEpsilon;
    return std::shared_ptr<const Node>(n);
  }();
  return Regex(node);
}

Regex Regex::atom(Symbol s) {
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::kAtom;
  n->symbol = std::move(s);
  return Regex(std::shared_ptr<const Node>(std::move(n)));
}

namespace {

std::vector<Regex> flatten(std::vector<Regex> children, RegexKind kind) {
  std::vector<Regex> flat;
  flat.reserve(children.size());
  for (auto& c : children) {
    if (c.kind() == kind) {
      for (const auto& g : c.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(c));
    }
  }
  return flat;
}

}  // namespace

Regex Regex::concat(std::vector<Regex> children) {
  auto flat = flatten(std::move(children), RegexKind::kConcat);
  if (flat.empty()) return epsilon();
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::kConcat;
  n->children = std::move(flat);
  return Regex(std::shared_ptr<const Node>(std::move(n)));
}

Regex Regex::disj(std::vector<Regex> children) {
  auto flat = flatten(std::move(children), RegexKind::kDisj);
  if (flat.empty()) return empty_set();
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::kDisj;
  n->children = std::move(flat);
  return Regex(std::shared_ptr<const Node>(std::move(n)));
}

Regex Regex::optional(Regex child) {
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::kOptional;
  n->children.push_back(std::move(child));
  return Regex(std::shared_ptr<const Node>(std::move(n)));
}

Regex Regex::plus(Regex child) {
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::kPlus;
  n->children.push_back(std::move(child));
  return Regex(std::shared_ptr<const Node>(std::move(n)));
}

RegexKind Regex::kind() const { return node_->kind; }

const Symbol& Regex::symbol() const {
  if (node_->kind != RegexKind::kAtom) throw PreconditionError("symbol() on a non-atom");
  return node_->symbol;
}

std::span<const Regex> Regex::children() const { return node_->children; }

const Regex& Regex::child() const {
  if (node_->kind != RegexKind::kOptional && node_->kind != RegexKind::kPlus)
    throw PreconditionError("child() on a non-unary node");
  return node_->children.front();
}

bool Regex::operator==(const Regex& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  if (node_->kind == RegexKind::kAtom) return node_->symbol == other.node_->symbol;
  return node_->children == other.node_->children;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Regex parse_all() {
    skip_space();
    if (at_end()) throw ParseError("empty expression", pos_);
    Regex r = parse_disj();
    skip_space();
    if (!at_end()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return r;
  }

 private:
  static constexpr std::string_view kEpsUtf8 = "\xCE\xB5";    // ε
  static constexpr std::string_view kEmptyUtf8 = "\xE2\x88\x85";  // ∅

  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool starts_atom() {
    skip_space();
    if (at_end()) return false;
    char c = text_[pos_];
    if (c == '(' || c == '_' || std::isalpha(static_cast<unsigned char>(c))) return true;
    auto rest = text_.substr(pos_);
    return rest.starts_with(kEpsUtf8) || rest.starts_with(kEmptyUtf8);
  }

  Regex parse_disj() {
    std::vector<Regex> alts;
    alts.push_back(parse_concat());
    for (;;) {
      skip_space();
      if (at_end() || text_[pos_] != '|') break;
      ++pos_;
      alts.push_back(parse_concat());
    }
    return Regex::disj(std::move(alts));
  }

  Regex parse_concat() {
    if (!starts_atom()) {
      if (at_end()) throw ParseError("expected an operand, got end of input", pos_);
      throw ParseError("expected an operand, got '" + std::string(1, text_[pos_]) + "'", pos_);
    }
    std::vector<Regex> parts;
    while (starts_atom()) parts.push_back(parse_postfix());
    return Regex::concat(std::move(parts));
  }

  Regex parse_postfix() {
    Regex r = parse_atom();
    for (;;) {
      skip_space();
      if (at_end()) break;
      char c = text_[pos_];
      if (c == '?') {
        r = Regex::optional(r);
      } else if (c == '+') {
        r = Regex::plus(r);
      } else if (c == '*') {
        r = Regex::star(r);
      } else {
        break;
      }
      ++pos_;
    }
    return r;
  }

  Regex parse_atom() {
    skip_space();
    auto rest = text_.substr(pos_);
    if (rest.starts_with(kEpsUtf8)) {
      pos_ += kEpsUtf8.size();
      return Regex::epsilon();
    }
    if (rest.starts_with(kEmptyUtf8)) {
      pos_ += kEmptyUtf8.size();
      return Regex::empty_set();
    }
    if (text_[pos_] == '(') {
      std::size_t open = pos_++;
      Regex r = parse_disj();
      skip_space();
      if (at_end() || text_[pos_] != ')') throw ParseError("unbalanced '('", open);
      ++pos_;
      return r;
    }
    std::size_t start = pos_;
    while (!at_end()) {
      unsigned char c = static_cast<unsigned char>(text_[pos_]);
      if (std::isalnum(c) || c == '_' || (c == '-' && pos_ > start)) {
        ++pos_;
      } else {
        break;
      }
    }
    std::string name(text_.substr(start, pos_ - start));
    if (!at_end() && text_[pos_] == '#') {
      std::size_t hash = pos_++;
      std::size_t digits = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (digits == pos_) throw ParseError("expected copy number after '#'", hash);
      int index = std::stoi(std::string(text_.substr(digits, pos_ - digits)));
      if (index < 1) throw ParseError("copy number must be positive", digits);
      return Regex::atom(Symbol(std::move(name), index));
    }
    if (name == "EPS") return Regex::epsilon();
    if (name == "EMPTY") return Regex::empty_set();
    return Regex::atom(Symbol(std::move(name)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Regex parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// rendering

namespace {

bool is_leaf(const Regex& r) {
  return r.is(RegexKind::kAtom) || r.is(RegexKind::kEpsilon) || r.is(RegexKind::kEmptySet);
}

void render_into(const Regex& r, std::string& out, bool nested) {
  switch (r.kind()) {
    case RegexKind::kEmptySet:
      out += "EMPTY";
      return;
    case RegexKind::kEpsilon:
      out += "EPS";
      return;
    case RegexKind::kAtom:
      out += r.symbol().str();
      return;
    case RegexKind::kConcat: {
      bool first = true;
      for (const auto& c : r.children()) {
        if (!first) out += ' ';
        first = false;
        render_into(c, out, true);
      }
      return;
    }
    case RegexKind::kDisj: {
      if (nested) out += '(';
      bool first = true;
      for (const auto& c : r.children()) {
        if (!first) out += " | ";
        first = false;
        render_into(c, out, false);
      }
      if (nested) out += ')';
      return;
    }
    case RegexKind::kOptional:
    case RegexKind::kPlus: {
      const Regex& c = r.child();
      if (is_leaf(c)) {
        render_into(c, out, true);
      } else {
        out += '(';
        render_into(c, out, false);
        out += ')';
      }
      out += r.is(RegexKind::kOptional) ? '?' : '+';
      return;
    }
  }
}

}  // namespace

std::string render(const Regex& r) {
  std::string out;
  render_into(r, out, false);
  return out;
}

// ---------------------------------------------------------------------------
// stats, marking

namespace {

std::size_t printed_length(const Regex& r) {
  switch (r.kind()) {
    case RegexKind::kEmptySet:
    case RegexKind::kEpsilon:
    case RegexKind::kAtom:
      return 1;
    case RegexKind::kConcat:
    case RegexKind::kDisj: {
      std::size_t n = r.children().size() - 1;
      for (const auto& c : r.children()) {
        n += printed_length(c);
        if (r.is(RegexKind::kConcat) && c.is(RegexKind::kDisj)) n += 2;
      }
      return n;
    }
    case RegexKind::kOptional:
    case RegexKind::kPlus: {
      const Regex& c = r.child();
      std::size_t n = printed_length(c) + 1;
      if (c.is(RegexKind::kConcat) || c.is(RegexKind::kDisj)) n += 2;
      return n;
    }
  }
  return 0;
}

void count_symbols(const Regex& r, std::map<std::string, std::size_t>& counts) {
  if (r.is(RegexKind::kAtom)) {
    ++counts[r.symbol().name];
    return;
  }
  for (const auto& c : r.children()) count_symbols(c, counts);
}

Regex rebuild(const Regex& r, std::vector<Regex> children) {
  switch (r.kind()) {
    case RegexKind::kConcat:
      return Regex::concat(std::move(children));
    case RegexKind::kDisj:
      return Regex::disj(std::move(children));
    case RegexKind::kOptional:
      return Regex::optional(std::move(children.front()));
    case RegexKind::kPlus:
      return Regex::plus(std::move(children.front()));
    default:
      return r;
  }
}

Regex map_atoms(const Regex& r, const std::function<Symbol(const Symbol&)>& f) {
  if (r.is(RegexKind::kAtom)) return Regex::atom(f(r.symbol()));
  if (is_leaf(r)) return r;
  std::vector<Regex> children;
  for (const auto& c : r.children()) children.push_back(map_atoms(c, f));
  return rebuild(r, std::move(children));
}

}  // namespace

ExprStats stats(const Regex& r) {
  ExprStats s;
  std::map<std::string, std::size_t> counts;
  count_symbols(r, counts);
  for (const auto& [name, n] : counts) {
    s.alphabet.insert(name);
    s.occ += n;
    s.k = std::max(s.k, n);
  }
  if (!s.alphabet.empty()) s.kappa = static_cast<double>(s.occ) / static_cast<double>(s.alphabet.size());
  s.length = printed_length(r);
  return s;
}

bool nullable(const Regex& r) {
  switch (r.kind()) {
    case RegexKind::kEmptySet:
    case RegexKind::kAtom:
      return false;
    case RegexKind::kEpsilon:
    case RegexKind::kOptional:
      return true;
    case RegexKind::kPlus:
      return nullable(r.child());
    case RegexKind::kConcat:
      return std::all_of(r.children().begin(), r.children().end(),
                         [](const Regex& c) { return nullable(c); });
    case RegexKind::kDisj:
      return std::any_of(r.children().begin(), r.children().end(),
                         [](const Regex& c) { return nullable(c); });
  }
  return false;
}

bool contains_empty_set(const Regex& r) {
  if (r.is(RegexKind::kEmptySet)) return true;
  return std::any_of(r.children().begin(), r.children().end(),
                     [](const Regex& c) { return contains_empty_set(c); });
}

Regex mark(const Regex& r) {
  std::map<std::string, int> seen;
  return map_atoms(r, [&](const Symbol& s) { return Symbol(s.name, ++seen[s.name]); });
}

Regex strip(const Regex& r) {
  return map_atoms(r, [](const Symbol& s) { return s.base(); });
}

Word strip(const std::vector<Symbol>& marked_word) {
  Word w;
  w.reserve(marked_word.size());
  for (const auto& s : marked_word) w.push_back(s.name);
  return w;
}

// ---------------------------------------------------------------------------
// rewriting

namespace {

using NodeRule = std::optional<Regex> (*)(const Regex&);

// Rewrites innermost-first; whenever a rule fires at a node, the result is
// rewritten again from its leaves.
Regex rewrite_fixpoint(const Regex& r, NodeRule rule) {
  Regex cur = r;
  if (!is_leaf(cur)) {
    std::vector<Regex> children;
    for (const auto& c : cur.children()) children.push_back(rewrite_fixpoint(c, rule));
    cur = rebuild(cur, std::move(children));
  }
  if (auto next = rule(cur)) return rewrite_fixpoint(*next, rule);
  return cur;
}

std::optional<Regex> simplify_rule(const Regex& r) {
  if (r.is(RegexKind::kOptional)) {
    const Regex& c = r.child();
    if (c.is(RegexKind::kOptional)) return c;  // r?? -> r?
    if (c.is(RegexKind::kConcat) &&
        std::all_of(c.children().begin(), c.children().end(),
                    [](const Regex& g) { return g.is(RegexKind::kOptional); })) {
      return c;  // (r1? r2?)? -> r1? r2?
    }
    return std::nullopt;
  }
  if (r.is(RegexKind::kPlus)) {
    const Regex& c = r.child();
    if (c.is(RegexKind::kPlus)) return c;  // (r+)+ -> r+
    if (c.is(RegexKind::kOptional)) return Regex::optional(Regex::plus(c.child()));  // (r?)+ -> r+?
    if (c.is(RegexKind::kDisj) &&
        std::any_of(c.children().begin(), c.children().end(),
                    [](const Regex& g) { return g.is(RegexKind::kPlus); })) {
      std::vector<Regex> alts;
      for (const auto& g : c.children()) alts.push_back(g.is(RegexKind::kPlus) ? g.child() : g);
      return Regex::plus(Regex::disj(std::move(alts)));  // (r1 + r2+)+ -> (r1 + r2)+
    }
    return std::nullopt;
  }
  if (r.is(RegexKind::kDisj) &&
      std::any_of(r.children().begin(), r.children().end(),
                  [](const Regex& g) { return g.is(RegexKind::kOptional); })) {
    std::vector<Regex> alts;
    for (const auto& g : r.children()) alts.push_back(g.is(RegexKind::kOptional) ? g.child() : g);
    return Regex::optional(Regex::disj(std::move(alts)));  // r1 + r2? -> (r1 + r2)?
  }
  return std::nullopt;
}

std::optional<Regex> normalize_rule(const Regex& r) {
  switch (r.kind()) {
    case RegexKind::kOptional: {
      const Regex& c = r.child();
      if (c.is(RegexKind::kOptional)) return c;
      if (c.is(RegexKind::kEpsilon) || c.is(RegexKind::kEmptySet)) return Regex::epsilon();
      return std::nullopt;
    }
    case RegexKind::kPlus: {
      const Regex& c = r.child();
      if (c.is(RegexKind::kPlus)) return c;
      if (c.is(RegexKind::kOptional)) return Regex::optional(Regex::plus(c.child()));
      if (c.is(RegexKind::kEpsilon) || c.is(RegexKind::kEmptySet)) return c;
      return std::nullopt;
    }
    case RegexKind::kConcat: {
      bool changed = false;
      std::vector<Regex> parts;
      for (const auto& c : r.children()) {
        if (c.is(RegexKind::kEmptySet)) return Regex::empty_set();
        if (c.is(RegexKind::kEpsilon)) {
          changed = true;
          continue;
        }
        parts.push_back(c);
      }
      if (!changed) return std::nullopt;
      return Regex::concat(std::move(parts));
    }
    case RegexKind::kDisj: {
      bool changed = false;
      bool has_epsilon = false;
      std::vector<Regex> alts;
      for (const auto& c : r.children()) {
        if (c.is(RegexKind::kEmptySet)) {
          changed = true;
        } else if (c.is(RegexKind::kEpsilon)) {
          changed = has_epsilon = true;
        } else {
          alts.push_back(c);
        }
      }
      if (!changed) return std::nullopt;
      if (has_epsilon) {
        if (alts.empty()) return Regex::epsilon();
        return Regex::optional(Regex::disj(std::move(alts)));
      }
      return Regex::disj(std::move(alts));
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

Regex simplify(const Regex& r) { return rewrite_fixpoint(r, &simplify_rule); }

Regex normalize(const Regex& r) { return rewrite_fixpoint(r, &normalize_rule); }

Regex sort_disjunctions(const Regex& r) {
  if (is_leaf(r)) return r;
  std::vector<Regex> children;
  for (const auto& c : r.children()) children.push_back(sort_disjunctions(c));
  if (r.is(RegexKind::kDisj)) {
    std::stable_sort(children.begin(), children.end(),
                     [](const Regex& a, const Regex& b) { return render(a) < render(b); });
  }
  return rebuild(r, std::move(children));
}

}  // namespace rexinfer
