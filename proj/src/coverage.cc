#include "rexinfer/coverage.h"

#include <algorithm>
#include <deque>
#include <map>

#include "rexinfer/datagen.h"
#include "rexinfer/error.h"
#include "rexinfer/glushkov.h"

namespace rexinfer {

namespace {

Koa target_automaton(const Regex& r) {
  if (!is_deterministic(r)) throw PreconditionError("coverage needs a deterministic expression: " + render(r));
  return glushkov_automaton(r);
}

// Breadth-first tree over successors (forward) or predecessors (backward).
std::vector<StateId> bfs_parents(const Koa& g, StateId root, bool forward) {
  std::vector<StateId> parent(g.num_states(), g.num_states());
  parent[root] = root;
  std::deque<StateId> queue{root};
  while (!queue.empty()) {
    StateId v = queue.front();
    queue.pop_front();
    for (StateId w : forward ? g.successors(v) : g.predecessors(v))
      if (parent[w] == g.num_states()) {
        parent[w] = v;
        queue.push_back(w);
      }
  }
  return parent;
}

// One word per edge of g, in edge order.
std::vector<Word> edge_words(const Koa& g) {
  auto from_src = bfs_parents(g, Koa::kSrc, true);
  auto to_sink = bfs_parents(g, Koa::kSink, false);
  std::vector<Word> out;
  for (const auto& [s, t] : g.edges()) {
    Word head;
    for (StateId v = s; v != Koa::kSrc; v = from_src[v]) head.push_back(g.label(v).name);
    std::reverse(head.begin(), head.end());
    for (StateId v = t; v != Koa::kSink; v = to_sink[v]) head.push_back(g.label(v).name);
    out.push_back(std::move(head));
  }
  return out;
}

}  // namespace

std::set<std::pair<StateId, StateId>> witnessed_edges(const Koa& g, const Sample& s) {
  std::set<std::pair<StateId, StateId>> seen;
  for (const auto& [w, m] : s.words()) {
    auto run = det_run(g, w);
    if (!run) continue;
    for (std::size_t i = 0; i + 1 < run->size(); ++i) seen.insert({(*run)[i], (*run)[i + 1]});
  }
  return seen;
}

EdgeCoverage edge_coverage(const Regex& r, const Sample& s) {
  Koa g = target_automaton(r);
  return {witnessed_edges(g, s).size(), g.num_edges()};
}

double coverage(const Regex& r, const Sample& s) { return edge_coverage(r, s).value(); }

Sample covering_sample(const Regex& r, std::mt19937_64& rng, std::size_t size) {
  Koa g = target_automaton(r);
  Sample s;
  for (const auto& w : edge_words(g))
    if (!s.count(w)) s.add(w);
  SampleGenConfig cfg;
  while (s.size() < size) s.add(gen_word(r, cfg, rng));
  if (witnessed_edges(g, s).size() != g.num_edges())
    throw InvariantError("covering_sample left an edge unwitnessed");
  return s;
}

Sample complete_coverage(const Regex& r, const Sample& s) {
  Koa g = target_automaton(r);
  auto seen = witnessed_edges(g, s);
  Sample out = s;
  auto edges = g.edges();
  auto words = edge_words(g);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (seen.count(edges[i])) continue;
    out.add(words[i]);
    auto run = det_run(g, words[i]);
    for (std::size_t j = 0; j + 1 < run->size(); ++j) seen.insert({(*run)[j], (*run)[j + 1]});
  }
  return out;
}

Sample subsample_to_coverage(const Regex& r, const Sample& s, double target, std::mt19937_64& rng) {
  if (!(target >= 0 && target <= 1)) throw PreconditionError("target coverage must lie in [0,1]");
  Koa g = target_automaton(r);
  const double total = static_cast<double>(g.num_edges());
  std::vector<std::pair<Word, std::size_t>> pool(s.words().begin(), s.words().end());
  std::shuffle(pool.begin(), pool.end(), rng);
  std::set<std::pair<StateId, StateId>> seen;
  Sample out;
  for (const auto& [w, m] : pool) {
    auto run = det_run(g, w);
    if (!run) continue;
    auto grown = seen;
    for (std::size_t i = 0; i + 1 < run->size(); ++i) grown.insert({(*run)[i], (*run)[i + 1]});
    if (static_cast<double>(grown.size()) / total > target) continue;
    seen = std::move(grown);
    out.add(w, m);
  }
  return out;
}

}  // namespace rexinfer
