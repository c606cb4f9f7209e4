#include "rexinfer/rewrite.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "rexinfer/error.h"

namespace rexinfer {

namespace {

using Edge = std::pair<StateId, StateId>;

// A sub-automaton: positions, entry and exit positions, internal edges and
// whether the empty word is accepted. Node ids are those of the SOA; src
// and sink keep their ids 0 and 1.
struct Part {
  std::vector<StateId> pos;
  std::set<StateId> entries;
  std::set<StateId> exits;
  std::set<Edge> edges;
  bool nullable = false;
};

constexpr std::size_t kStepBudget = 1'000'000;

class Translator {
 public:
  explicit Translator(const Koa& h) : h_(h) {}

  Regex run(Part p) { return decompose(std::move(p)); }
  std::size_t repairs() const { return repairs_; }

 private:
  void tick() {
    if (++steps_ > kStepBudget) throw InvariantError("soa_to_sore exceeded its step budget");
  }

  Regex atom(StateId x) const { return Regex::atom(h_.label(x)); }

  static Regex maybe_optional(Regex r, bool nullable) {
    return nullable ? Regex::optional(std::move(r)) : r;
  }

  Regex decompose(Part p) {
    for (;;) {
      tick();
      if (p.pos.empty()) return p.nullable ? Regex::epsilon() : Regex::empty_set();
      if (p.pos.size() == 1) {
        StateId x = p.pos.front();
        Regex r = atom(x);
        if (p.edges.count({x, x})) r = Regex::plus(r);
        return maybe_optional(r, p.nullable);
      }
      if (all_back_edges(p)) return plus_of(p, p.exits);
      if (auto parts = components(p); parts.size() > 1) {
        std::vector<Regex> alts;
        for (auto& q : parts) {
          q.nullable = p.nullable;
          alts.push_back(decompose(std::move(q)));
        }
        return Regex::disj(std::move(alts));
      }
      auto order = condensation(p);
      if (auto cut = find_cut(p, order, false)) return concat_at(p, *cut);
      if (p.nullable) {
        p.nullable = false;
        return Regex::optional(decompose(std::move(p)));
      }
      if (order.size() > 3) {
        auto cut = find_cut(p, order, true);
        if (!cut) throw InvariantError("soa_to_sore found no cut to repair");
        add_missing(p, *cut);
        continue;
      }
      // All positions form one strongly connected component: treat every
      // edge into an entry as a loop-back edge.
      std::set<StateId> loop_exits = p.exits;
      for (const auto& [x, y] : p.edges)
        if (p.entries.count(y)) loop_exits.insert(x);
      for (StateId x : loop_exits)
        if (!p.exits.count(x)) ++repairs_;
      for (StateId x : loop_exits)
        for (StateId f : p.entries)
          if (!p.edges.count({x, f})) ++repairs_;
      return plus_of(p, loop_exits);
    }
  }

  static bool all_back_edges(const Part& p) {
    for (StateId x : p.exits)
      for (StateId f : p.entries)
        if (!p.edges.count({x, f})) return false;
    return true;
  }

  Regex plus_of(const Part& p, const std::set<StateId>& exits) {
    Part inner;
    inner.pos = p.pos;
    inner.entries = p.entries;
    inner.exits = exits;
    for (const auto& e : p.edges)
      if (!(exits.count(e.first) && p.entries.count(e.second))) inner.edges.insert(e);
    return maybe_optional(Regex::plus(decompose(std::move(inner))), p.nullable);
  }

  static std::vector<Part> components(const Part& p) {
    std::map<StateId, StateId> parent;
    for (StateId x : p.pos) parent[x] = x;
    std::function<StateId(StateId)> find = [&](StateId x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& [x, y] : p.edges) {
      StateId a = find(x), b = find(y);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<StateId, Part> groups;
    for (StateId x : p.pos) groups[find(x)].pos.push_back(x);
    if (groups.size() < 2) return {};
    std::vector<Part> out;
    for (auto& [root, q] : groups) {
      for (StateId x : q.pos) {
        if (p.entries.count(x)) q.entries.insert(x);
        if (p.exits.count(x)) q.exits.insert(x);
      }
      for (const auto& e : p.edges)
        if (find(e.first) == root) q.edges.insert(e);
      out.push_back(std::move(q));
    }
    return out;
  }

  // Outgoing edges of the part seen as an automaton with src and sink.
  static std::map<StateId, std::vector<StateId>> adjacency(const Part& p) {
    std::map<StateId, std::vector<StateId>> adj;
    adj[Koa::kSrc];
    adj[Koa::kSink];
    for (StateId x : p.pos) adj[x];
    for (StateId f : p.entries) adj[Koa::kSrc].push_back(f);
    for (StateId l : p.exits) adj[l].push_back(Koa::kSink);
    if (p.nullable) adj[Koa::kSrc].push_back(Koa::kSink);
    for (const auto& [x, y] : p.edges) adj[x].push_back(y);
    return adj;
  }

  // Strongly connected components in topological order (Tarjan emits them
  // in reverse).
  static std::vector<std::vector<StateId>> condensation(const Part& p) {
    auto adj = adjacency(p);
    std::map<StateId, std::size_t> index, low;
    std::set<StateId> on_stack;
    std::vector<StateId> stack;
    std::vector<std::vector<StateId>> sccs;
    std::size_t counter = 0;
    std::function<void(StateId)> visit = [&](StateId v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      for (StateId w : adj[v]) {
        if (!index.count(w)) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<StateId> scc;
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          scc.push_back(w);
        } while (w != v);
        std::sort(scc.begin(), scc.end());
        sccs.push_back(std::move(scc));
      }
    };
    for (const auto& [v, out] : adj)
      if (!index.count(v)) visit(v);
    std::reverse(sccs.begin(), sccs.end());
    return sccs;
  }

  struct Cut {
    std::set<StateId> left;  // includes src
    std::set<Edge> missing;
  };

  // First prefix of the topological order, with positions on both sides,
  // whose crossing edges form a complete bipartite set. With `repair`, the
  // prefix needing the fewest extra edges instead.
  static std::optional<Cut> find_cut(const Part& p, const std::vector<std::vector<StateId>>& order,
                                     bool repair) {
    auto adj = adjacency(p);
    std::optional<Cut> best;
    std::set<StateId> left;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      left.insert(order[i].begin(), order[i].end());
      if (i == 0 || i + 2 == order.size()) continue;  // a side without positions
      std::set<StateId> xs, ys;
      std::set<Edge> cross;
      for (StateId x : left)
        for (StateId y : adj[x])
          if (!left.count(y)) {
            xs.insert(x);
            ys.insert(y);
            cross.insert({x, y});
          }
      Cut c{left, {}};
      for (StateId x : xs)
        for (StateId y : ys)
          if (!cross.count({x, y})) c.missing.insert({x, y});
      if (!repair) {
        if (c.missing.empty()) return c;
      } else if (!best || c.missing.size() < best->missing.size()) {
        best = std::move(c);
      }
    }
    return best;
  }

  void add_missing(Part& p, const Cut& cut) {
    for (const auto& [x, y] : cut.missing) {
      ++repairs_;
      if (x == Koa::kSrc && y == Koa::kSink) {
        p.nullable = true;
      } else if (x == Koa::kSrc) {
        p.entries.insert(y);
      } else if (y == Koa::kSink) {
        p.exits.insert(x);
      } else {
        p.edges.insert({x, y});
      }
    }
  }

  Regex concat_at(const Part& p, const Cut& cut) {
    auto adj = adjacency(p);
    Part head, tail;
    for (StateId x : p.pos) (cut.left.count(x) ? head : tail).pos.push_back(x);
    for (StateId x : cut.left) {
      for (StateId y : adj[x]) {
        if (cut.left.count(y)) continue;
        if (x == Koa::kSrc) {
          head.nullable = true;
        } else {
          head.exits.insert(x);
        }
        if (y == Koa::kSink) {
          tail.nullable = true;
        } else {
          tail.entries.insert(y);
        }
      }
    }
    for (StateId f : p.entries)
      if (cut.left.count(f)) head.entries.insert(f);
    for (StateId l : p.exits)
      if (!cut.left.count(l)) tail.exits.insert(l);
    for (const auto& e : p.edges) {
      bool a = cut.left.count(e.first), b = cut.left.count(e.second);
      if (a && b) head.edges.insert(e);
      if (!a && !b) tail.edges.insert(e);
    }
    Regex first = decompose(std::move(head));
    Regex second = decompose(std::move(tail));
    return Regex::concat({first, second});
  }

  const Koa& h_;
  std::size_t repairs_ = 0;
  std::size_t steps_ = 0;
};

}  // namespace

Koa marking(const Koa& g) {
  Koa h;
  std::map<std::string, int> seen;
  for (StateId s = 2; s < g.num_states(); ++s) h.add_state(Symbol(g.label(s).name, ++seen[g.label(s).name]));
  for (const auto& [x, y] : g.edges()) h.add_edge(x, y);
  return h;
}

SoreTranslation soa_to_sore(const Koa& h) {
  std::set<Symbol> labels;
  for (StateId s = 2; s < h.num_states(); ++s)
    if (!labels.insert(h.label(s)).second)
      throw PreconditionError("soa_to_sore needs distinct state labels, '" + h.label(s).str() + "' repeats");
  h.validate();
  Part top;
  for (StateId s = 2; s < h.num_states(); ++s) top.pos.push_back(s);
  for (StateId t : h.successors(Koa::kSrc)) {
    if (t == Koa::kSink) {
      top.nullable = true;
    } else {
      top.entries.insert(t);
    }
  }
  for (StateId s : h.predecessors(Koa::kSink))
    if (s != Koa::kSrc) top.exits.insert(s);
  for (const auto& [x, y] : h.edges())
    if (x != Koa::kSrc && y != Koa::kSink) top.edges.insert({x, y});
  Translator t(h);
  Regex r = t.run(std::move(top));
  return {r, t.repairs()};
}

Regex koa_to_kore(const Koa& g) { return strip(soa_to_sore(marking(g)).expr); }

}  // namespace rexinfer
