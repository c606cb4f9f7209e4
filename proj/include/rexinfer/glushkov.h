#ifndef REXINFER_GLUSHKOV_H_
#define REXINFER_GLUSHKOV_H_

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rexinfer/koa.h"
#include "rexinfer/regex.h"

namespace rexinfer {

using BigInt = boost::multiprecision::cpp_int;

struct PositionSets {
  bool nullable = false;
  std::set<Symbol> first;
  std::set<Symbol> last;
  std::map<Symbol, std::set<Symbol>> follow;
};

// Requires every atom of r to be distinct (a marked expression). Throws
// PreconditionError otherwise.
PositionSets position_sets(const Regex& marked);

// One state per position of mark(r), labeled with the base symbol, in
// left-to-right position order. Throws PreconditionError if L(r) is empty.
Koa glushkov_automaton(const Regex& r);

bool is_deterministic(const Regex& r);
bool accepts(const Regex& r, const Word& w);

// counts[i] = number of words of length exactly i in L(r), i = 0..n.
std::vector<BigInt> count_words(const Regex& r, std::size_t n);

bool equivalent(const Regex& a, const Regex& b);
// L(a) ⊆ L(b).
bool included(const Regex& a, const Regex& b);
// A shortest word in the symmetric difference, if any.
std::optional<Word> distinguishing_word(const Regex& a, const Regex& b);

// Complete DFA over a fixed alphabet. State 0 is the start state; missing
// transitions are represented by an explicit dead state.
struct Dfa {
  std::vector<std::string> alphabet;
  std::vector<std::vector<std::size_t>> next;
  std::vector<bool> accepting;

  std::size_t size() const { return accepting.size(); }
};

inline constexpr std::size_t kSubsetCap = std::size_t{1} << 16;

// Subset construction over the given alphabet (symbols of g missing from it
// are unreachable). Throws Error when more than `cap` subsets arise.
Dfa determinize(const Koa& g, const std::vector<std::string>& alphabet,
                std::size_t cap = kSubsetCap);
Dfa to_dfa(const Regex& r, const std::vector<std::string>& alphabet);

// Minimal DFA with states numbered in breadth-first order, serialized. Two
// expressions have the same key over the same alphabet iff they are
// equivalent.
std::string canonical_key(const Dfa& d);

}  // namespace rexinfer

#endif  // REXINFER_GLUSHKOV_H_
