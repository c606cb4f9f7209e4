#ifndef REXINFER_KOA_H_
#define REXINFER_KOA_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rexinfer/regex.h"

namespace rexinfer {

using StateId = std::size_t;

// State-labeled automaton with a distinguished source and sink. A word
// a1..an is accepted when there is a walk src, s1, .., sn, sink with
// label(si) = ai. Labels may be marked symbols (after marking).
class Koa {
 public:
  static constexpr StateId kSrc = 0;
  static constexpr StateId kSink = 1;

  Koa();

  StateId add_state(Symbol label);
  void add_edge(StateId from, StateId to);
  void remove_edge(StateId from, StateId to);
  bool has_edge(StateId from, StateId to) const;

  std::size_t num_states() const { return labels_.size(); }
  std::size_t num_edges() const;
  const Symbol& label(StateId s) const;
  // Sorted ascending.
  const std::vector<StateId>& successors(StateId s) const { return succ_.at(s); }
  const std::vector<StateId>& predecessors(StateId s) const { return pred_.at(s); }
  std::vector<std::pair<StateId, StateId>> edges() const;

  // Base symbol names of all labeled states.
  std::set<std::string> alphabet() const;
  // Largest number of states sharing one label.
  std::size_t max_label_multiplicity() const;

  // Throws InvariantError unless: src has no incoming edges, sink has no
  // outgoing edges, every labeled state lies on a src-to-sink walk, and (if
  // given) no label is carried by more than k states.
  void validate(std::optional<std::size_t> k = std::nullopt) const;

  // No state (src included) has two successors with the same label.
  bool is_deterministic() const;

  // Copy without the labeled states that are not on any src-to-sink walk.
  // Surviving states keep their relative order.
  Koa trimmed() const;

  // Renumbered structural equality (same labels per id, same edges).
  bool operator==(const Koa& other) const;

 private:
  std::vector<Symbol> labels_;
  std::vector<std::vector<StateId>> succ_;
  std::vector<std::vector<StateId>> pred_;
};

// Bag of words.
class Sample {
 public:
  Sample() = default;
  Sample(std::initializer_list<Word> words);

  void add(const Word& w, std::size_t multiplicity = 1);
  // Total number of words, counting multiplicity.
  std::size_t size() const { return total_; }
  std::size_t distinct_size() const { return counts_.size(); }
  bool empty() const { return total_ == 0; }
  std::size_t count(const Word& w) const;
  const std::map<Word, std::size_t>& words() const { return counts_; }
  std::set<std::string> alphabet() const;

  bool operator==(const Sample&) const = default;

 private:
  std::map<Word, std::size_t> counts_;
  std::size_t total_ = 0;
};

// src -> sink, src -> one state per symbol, and every labeled state -> every
// state other than src (itself included). Accepts every word over the
// alphabet.
Koa complete_koa(const std::set<std::string>& alphabet, std::size_t k);

bool nfa_accepts(const Koa& g, const Word& w);

// The unique accepting run src, s1, .., sn, sink, or nullopt if w is
// rejected. Throws PreconditionError if g is not deterministic.
std::optional<std::vector<StateId>> det_run(const Koa& g, const Word& w);

// Keeps only the edges traversed by some word of s, then removes dead
// states. Throws PreconditionError if g is non-deterministic or rejects a
// word of s.
Koa prune(const Koa& g, const Sample& s);

}  // namespace rexinfer

#endif  // REXINFER_KOA_H_
