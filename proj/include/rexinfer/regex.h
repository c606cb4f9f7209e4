#ifndef REXINFER_REGEX_H_
#define REXINFER_REGEX_H_

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rexinfer {

// An alphabet symbol, optionally carrying a copy number. Index 0 means the
// symbol is unmarked; marked copies a#1, a#2, ... have index >= 1.
struct Symbol {
  std::string name;
  int index = 0;

  Symbol() = default;
  explicit Symbol(std::string n, int i = 0) : name(std::move(n)), index(i) {}

  bool marked() const { return index > 0; }
  Symbol base() const { return Symbol(name); }
  std::string str() const;

  auto operator<=>(const Symbol&) const = default;
  bool operator==(const Symbol&) const = default;
};

// A word is a sequence of unmarked symbol names.
using Word = std::vector<std::string>;

enum class RegexKind { kEmptySet, kEpsilon, kAtom, kConcat, kDisj, kOptional, kPlus };

// Immutable expression AST. Concatenations and disjunctions are n-ary and
// flattened: a child never has the same kind as its parent and there are
// always at least two children. There is no star node; r* is built as
// optional(plus(r)).
class Regex {
 public:
  // Default-constructed expressions are the empty set.
  Regex();

  static Regex empty_set();
  static Regex epsilon();
  static Regex atom(Symbol s);
  static Regex atom(std::string name) { return atom(Symbol(std::move(name))); }
  // Zero children give epsilon (concat) or the empty set (disj); a single
  // child is returned unchanged.
  static Regex concat(std::vector<Regex> children);
  static Regex disj(std::vector<Regex> children);
  static Regex optional(Regex child);
  static Regex plus(Regex child);
  static Regex star(Regex child) { return optional(plus(std::move(child))); }

  RegexKind kind() const;
  bool is(RegexKind k) const { return kind() == k; }
  const Symbol& symbol() const;  // kAtom only
  std::span<const Regex> children() const;
  const Regex& child() const;  // kOptional and kPlus only

  // Structural equality.
  bool operator==(const Regex& other) const;

 private:
  struct Node;
  explicit Regex(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Parses the surface syntax:
//   expr    := concat ("|" concat)*
//   concat  := postfix+
//   postfix := atom ("?" | "+" | "*")*
//   atom    := TOKEN ["#" INDEX] | "(" expr ")" | "ε" | "EPS" | "∅" | "EMPTY"
// Throws ParseError on malformed input.
Regex parse(std::string_view text);

// Renders in the surface syntax; parse(render(r)) == r.
std::string render(const Regex& r);

struct ExprStats {
  std::size_t occ = 0;                 // total symbol occurrences
  std::set<std::string> alphabet;      // base symbol names
  std::size_t k = 0;                   // max occurrences of one symbol
  std::optional<double> kappa;         // occ / |alphabet|, absent if empty
  std::size_t length = 0;              // printed length with explicit '·'
};

// `length` counts symbols, operators (one per '·', '+', '?') and the
// parentheses a minimal infix printing needs, e.g. (a·b)+? + c has length 9.
ExprStats stats(const Regex& r);

bool nullable(const Regex& r);
bool contains_empty_set(const Regex& r);

// Replaces the i-th left-to-right occurrence of every symbol a by a#i.
Regex mark(const Regex& r);
// Drops copy numbers.
Regex strip(const Regex& r);
Word strip(const std::vector<Symbol>& marked_word);

// Determinism-preserving rewrites (r?? -> r?, (r+)+ -> r+, (r?)+ -> r+?,
// (r1? r2?)? -> r1? r2?, (r1 + r2+)+ -> (r1 + r2)+, r1 + r2? -> (r1 + r2)?),
// applied innermost-first to a fixpoint. Associativity is structural.
Regex simplify(const Regex& r);

// The ε/∅ elimination system used for the enumerative learner's normal form.
Regex normalize(const Regex& r);

// Orders disjunction children by rendered form, recursively. Useful for
// comparing expressions that differ only in disjunct order.
Regex sort_disjunctions(const Regex& r);

}  // namespace rexinfer

#endif  // REXINFER_REGEX_H_
