#ifndef REXINFER_COVERAGE_H_
#define REXINFER_COVERAGE_H_

#include <cstddef>
#include <random>
#include <set>
#include <utility>

#include "rexinfer/koa.h"
#include "rexinfer/regex.h"

namespace rexinfer {

struct EdgeCoverage {
  std::size_t witnessed = 0;
  std::size_t total = 0;
  double value() const { return total == 0 ? 0.0 : static_cast<double>(witnessed) / static_cast<double>(total); }
};

// Edges of the Glushkov automaton of r (src -> sink included) traversed by
// the run of some sample word. Words outside L(r) witness nothing. Throws
// PreconditionError unless r is deterministic.
EdgeCoverage edge_coverage(const Regex& r, const Sample& s);
double coverage(const Regex& r, const Sample& s);

// Edges of g witnessed by the runs of the words in s (g deterministic).
std::set<std::pair<StateId, StateId>> witnessed_edges(const Koa& g, const Sample& s);

// One word per Glushkov edge (shortest path to the edge, the edge, shortest
// path to the sink), deduplicated, then padded with random draws up to
// `size` words when `size` exceeds the number of covering words.
Sample covering_sample(const Regex& r, std::mt19937_64& rng, std::size_t size = 0);

// s plus one covering word for every edge s leaves unwitnessed.
Sample complete_coverage(const Regex& r, const Sample& s);

// Greedy sub-bag of s (words in random order) whose coverage stays at most
// `target`. Words of s outside L(r) are dropped.
Sample subsample_to_coverage(const Regex& r, const Sample& s, double target, std::mt19937_64& rng);

}  // namespace rexinfer

#endif  // REXINFER_COVERAGE_H_
