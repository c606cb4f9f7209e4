#include "rexinfer/glushkov.h"

#include <algorithm>
#include <deque>
#include <functional>

#include "rexinfer/error.h"

namespace rexinfer {

namespace {

void collect_atoms(const Regex& r, std::vector<Symbol>& out) {
  if (r.is(RegexKind::kAtom)) {
    out.push_back(r.symbol());
    return;
  }
  for (const auto& c : r.children()) collect_atoms(c, out);
}

PositionSets sets_of(const Regex& r) {
  PositionSets p;
  switch (r.kind()) {
    case RegexKind::kEmptySet:
      return p;
    case RegexKind::kEpsilon:
      p.nullable = true;
      return p;
    case RegexKind::kAtom:
      p.first = p.last = {r.symbol()};
      p.follow[r.symbol()];
      return p;
    case RegexKind::kConcat: {
      p.nullable = true;
      for (const auto& c : r.children()) {
        PositionSets q = sets_of(c);
        for (auto& [x, f] : q.follow) p.follow[x] = std::move(f);
        for (const auto& x : p.last) p.follow[x].insert(q.first.begin(), q.first.end());
        if (p.nullable) p.first.insert(q.first.begin(), q.first.end());
        if (q.nullable) {
          p.last.insert(q.last.begin(), q.last.end());
        } else {
          p.last = q.last;
        }
        p.nullable = p.nullable && q.nullable;
      }
      return p;
    }
    case RegexKind::kDisj:
      for (const auto& c : r.children()) {
        PositionSets q = sets_of(c);
        p.nullable = p.nullable || q.nullable;
        p.first.insert(q.first.begin(), q.first.end());
        p.last.insert(q.last.begin(), q.last.end());
        for (auto& [x, f] : q.follow) p.follow[x] = std::move(f);
      }
      return p;
    case RegexKind::kOptional:
      p = sets_of(r.child());
      p.nullable = true;
      return p;
    case RegexKind::kPlus:
      p = sets_of(r.child());
      for (const auto& x : p.last) p.follow[x].insert(p.first.begin(), p.first.end());
      return p;
  }
  return p;
}

// Expression with the empty set eliminated, or nullopt when L(r) is empty.
std::optional<Regex> without_empty_set(const Regex& r) {
  if (!contains_empty_set(r)) return r;
  Regex n = normalize(r);
  if (n.is(RegexKind::kEmptySet)) return std::nullopt;
  return n;
}

std::vector<std::string> alphabet_of(const Regex& a, const Regex& b) {
  auto sa = stats(a).alphabet;
  auto sb = stats(b).alphabet;
  sa.insert(sb.begin(), sb.end());
  return {sa.begin(), sa.end()};
}

Dfa empty_language_dfa(const std::vector<std::string>& alphabet) {
  Dfa d;
  d.alphabet = alphabet;
  d.next.assign(1, std::vector<std::size_t>(alphabet.size(), 0));
  d.accepting.assign(1, false);
  return d;
}

// Breadth-first search of the product automaton for a pair of states where
// `bad(acc_a, acc_b)` holds; returns the word leading there.
std::optional<Word> product_search(const Dfa& a, const Dfa& b,
                                   const std::function<bool(bool, bool)>& bad) {
  const std::size_t m = a.alphabet.size();
  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::pair<std::size_t, std::size_t>, std::size_t>>
      parent;
  std::deque<std::pair<std::size_t, std::size_t>> queue{{0, 0}};
  parent[{0, 0}] = {{0, 0}, m};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    if (bad(a.accepting[cur.first], b.accepting[cur.second])) {
      Word w;
      for (auto p = cur; parent[p].second != m; p = parent[p].first) w.push_back(a.alphabet[parent[p].second]);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::pair<std::size_t, std::size_t> nxt{a.next[cur.first][i], b.next[cur.second][i]};
      if (parent.emplace(nxt, std::make_pair(cur, i)).second) queue.push_back(nxt);
    }
  }
  return std::nullopt;
}

}  // namespace

PositionSets position_sets(const Regex& marked) {
  std::vector<Symbol> atoms;
  collect_atoms(marked, atoms);
  std::set<Symbol> distinct(atoms.begin(), atoms.end());
  if (distinct.size() != atoms.size())
    throw PreconditionError("position_sets needs a single-occurrence (marked) expression");
  return sets_of(marked);
}

Koa glushkov_automaton(const Regex& r) {
  auto clean = without_empty_set(r);
  if (!clean) throw PreconditionError("glushkov_automaton: expression denotes the empty language");
  Regex marked = mark(*clean);
  PositionSets p = position_sets(marked);
  std::vector<Symbol> positions;
  collect_atoms(marked, positions);
  Koa g;
  std::map<Symbol, StateId> id;
  for (const auto& x : positions) id[x] = g.add_state(x.base());
  if (p.nullable) g.add_edge(Koa::kSrc, Koa::kSink);
  for (const auto& x : p.first) g.add_edge(Koa::kSrc, id[x]);
  for (const auto& x : p.last) g.add_edge(id[x], Koa::kSink);
  for (const auto& [x, f] : p.follow)
    for (const auto& y : f) g.add_edge(id[x], id[y]);
  return g;
}

bool is_deterministic(const Regex& r) {
  auto clean = without_empty_set(r);
  if (!clean) return true;
  return glushkov_automaton(*clean).is_deterministic();
}

bool accepts(const Regex& r, const Word& w) {
  auto clean = without_empty_set(r);
  if (!clean) return false;
  return nfa_accepts(glushkov_automaton(*clean), w);
}

Dfa determinize(const Koa& g, const std::vector<std::string>& alphabet, std::size_t cap) {
  Dfa d;
  d.alphabet = alphabet;
  std::map<std::string, std::size_t> symbol_index;
  for (std::size_t i = 0; i < alphabet.size(); ++i) symbol_index[alphabet[i]] = i;

  std::map<std::vector<StateId>, std::size_t> ids;
  std::vector<std::vector<StateId>> subsets;
  auto intern = [&](std::vector<StateId> subset) {
    auto [it, inserted] = ids.emplace(subset, subsets.size());
    if (inserted) {
      if (subsets.size() >= cap)
        throw Error("subset construction exceeded " + std::to_string(cap) + " states");
      subsets.push_back(std::move(subset));
    }
    return it->second;
  };
  intern({Koa::kSrc});
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::vector<std::vector<StateId>> moves(alphabet.size());
    bool accepting = false;
    for (StateId s : subsets[i]) {
      for (StateId t : g.successors(s)) {
        if (t == Koa::kSink) {
          accepting = true;
          continue;
        }
        auto it = symbol_index.find(g.label(t).name);
        if (it != symbol_index.end()) moves[it->second].push_back(t);
      }
    }
    std::vector<std::size_t> row(alphabet.size());
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      auto& m = moves[a];
      std::sort(m.begin(), m.end());
      m.erase(std::unique(m.begin(), m.end()), m.end());
      row[a] = intern(std::move(m));
    }
    d.next.push_back(std::move(row));
    d.accepting.push_back(accepting);
  }
  return d;
}

Dfa to_dfa(const Regex& r, const std::vector<std::string>& alphabet) {
  auto clean = without_empty_set(r);
  if (!clean) return empty_language_dfa(alphabet);
  return determinize(glushkov_automaton(*clean), alphabet);
}

std::string canonical_key(const Dfa& d) {
  const std::size_t n = d.size();
  const std::size_t m = d.alphabet.size();
  std::vector<std::size_t> cls(n);
  for (std::size_t s = 0; s < n; ++s) cls[s] = d.accepting[s] ? 1 : 0;
  std::size_t num_classes = 0;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> sig_ids;
    std::vector<std::size_t> next_cls(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> sig{cls[s]};
      for (std::size_t a = 0; a < m; ++a) sig.push_back(cls[d.next[s][a]]);
      next_cls[s] = sig_ids.emplace(std::move(sig), sig_ids.size()).first->second;
    }
    bool stable = sig_ids.size() == num_classes;
    num_classes = sig_ids.size();
    cls.swap(next_cls);
    if (stable) break;
  }
  std::vector<std::size_t> repr(num_classes, n);
  for (std::size_t s = 0; s < n; ++s)
    if (repr[cls[s]] == n) repr[cls[s]] = s;
  std::vector<std::size_t> order(num_classes, num_classes);
  std::vector<std::size_t> bfs{cls[0]};
  order[cls[0]] = 0;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    for (std::size_t a = 0; a < m; ++a) {
      std::size_t c = cls[d.next[repr[bfs[i]]][a]];
      if (order[c] == num_classes) {
        order[c] = bfs.size();
        bfs.push_back(c);
      }
    }
  }
  std::string key;
  for (std::size_t c : bfs) {
    key += d.accepting[repr[c]] ? 'A' : 'R';
    for (std::size_t a = 0; a < m; ++a) key += std::to_string(order[cls[d.next[repr[c]][a]]]) + ',';
    key += ';';
  }
  return key;
}

std::vector<BigInt> count_words(const Regex& r, std::size_t n) {
  auto sigma = stats(r).alphabet;
  Dfa d = to_dfa(r, {sigma.begin(), sigma.end()});
  std::vector<BigInt> counts(n + 1);
  std::vector<BigInt> ways(d.size());
  ways[0] = 1;
  for (std::size_t i = 0;; ++i) {
    for (std::size_t s = 0; s < d.size(); ++s)
      if (d.accepting[s]) counts[i] += ways[s];
    if (i == n) break;
    std::vector<BigInt> next(d.size());
    for (std::size_t s = 0; s < d.size(); ++s) {
      if (ways[s] == 0) continue;
      for (std::size_t t : d.next[s]) next[t] += ways[s];
    }
    ways.swap(next);
  }
  return counts;
}

std::optional<Word> distinguishing_word(const Regex& a, const Regex& b) {
  auto sigma = alphabet_of(a, b);
  return product_search(to_dfa(a, sigma), to_dfa(b, sigma), [](bool x, bool y) { return x != y; });
}

bool equivalent(const Regex& a, const Regex& b) { return !distinguishing_word(a, b); }

bool included(const Regex& a, const Regex& b) {
  auto sigma = alphabet_of(a, b);
  return !product_search(to_dfa(a, sigma), to_dfa(b, sigma), [](bool x, bool y) { return x && !y; });
}

}  // namespace rexinfer
