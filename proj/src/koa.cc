#include "rexinfer/koa.h"

#include <algorithm>
#include <deque>

#include "rexinfer/error.h"

namespace rexinfer {

namespace {

void sorted_insert(std::vector<StateId>& v, StateId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void sorted_erase(std::vector<StateId>& v, StateId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

std::vector<bool> reach(const Koa& g, StateId from, bool forward) {
  std::vector<bool> seen(g.num_states(), false);
  std::deque<StateId> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (StateId t : forward ? g.successors(s) : g.predecessors(s)) {
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
    }
  }
  return seen;
}

}  // namespace

Koa::Koa() : labels_(2), succ_(2), pred_(2) {}

StateId Koa::add_state(Symbol label) {
  if (label.name.empty()) throw PreconditionError("state label must be non-empty");
  labels_.push_back(std::move(label));
  succ_.emplace_back();
  pred_.emplace_back();
  return labels_.size() - 1;
}

void Koa::add_edge(StateId from, StateId to) {
  if (from >= num_states() || to >= num_states()) throw PreconditionError("edge endpoint out of range");
  if (to == kSrc) throw PreconditionError("src cannot have incoming edges");
  if (from == kSink) throw PreconditionError("sink cannot have outgoing edges");
  sorted_insert(succ_[from], to);
  sorted_insert(pred_[to], from);
}

void Koa::remove_edge(StateId from, StateId to) {
  if (from >= num_states() || to >= num_states()) return;
  sorted_erase(succ_[from], to);
  sorted_erase(pred_[to], from);
}

bool Koa::has_edge(StateId from, StateId to) const {
  if (from >= num_states()) return false;
  return std::binary_search(succ_[from].begin(), succ_[from].end(), to);
}

std::size_t Koa::num_edges() const {
  std::size_t n = 0;
  for (const auto& v : succ_) n += v.size();
  return n;
}

const Symbol& Koa::label(StateId s) const { return labels_.at(s); }

std::vector<std::pair<StateId, StateId>> Koa::edges() const {
  std::vector<std::pair<StateId, StateId>> out;
  for (StateId s = 0; s < num_states(); ++s)
    for (StateId t : succ_[s]) out.emplace_back(s, t);
  return out;
}

std::set<std::string> Koa::alphabet() const {
  std::set<std::string> out;
  for (StateId s = 2; s < num_states(); ++s) out.insert(labels_[s].name);
  return out;
}

std::size_t Koa::max_label_multiplicity() const {
  std::map<std::string, std::size_t> counts;
  std::size_t best = 0;
  for (StateId s = 2; s < num_states(); ++s) best = std::max(best, ++counts[labels_[s].name]);
  return best;
}

void Koa::validate(std::optional<std::size_t> k) const {
  if (!pred_[kSrc].empty()) throw InvariantError("src has incoming edges");
  if (!succ_[kSink].empty()) throw InvariantError("sink has outgoing edges");
  auto from_src = reach(*this, kSrc, true);
  auto to_sink = reach(*this, kSink, false);
  for (StateId s = 2; s < num_states(); ++s) {
    if (!from_src[s] || !to_sink[s])
      throw InvariantError("state " + std::to_string(s) + " (" + labels_[s].str() +
                           ") is not on a walk from src to sink");
  }
  if (k && max_label_multiplicity() > *k)
    throw InvariantError("more than " + std::to_string(*k) + " states share a label");
}

bool Koa::is_deterministic() const {
  for (StateId s = 0; s < num_states(); ++s) {
    std::set<Symbol> seen;
    for (StateId t : succ_[s]) {
      if (t == kSink) continue;
      if (!seen.insert(labels_[t]).second) return false;
    }
  }
  return true;
}

Koa Koa::trimmed() const {
  auto from_src = reach(*this, kSrc, true);
  auto to_sink = reach(*this, kSink, false);
  std::vector<StateId> remap(num_states(), num_states());
  Koa out;
  remap[kSrc] = kSrc;
  remap[kSink] = kSink;
  for (StateId s = 2; s < num_states(); ++s)
    if (from_src[s] && to_sink[s]) remap[s] = out.add_state(labels_[s]);
  for (StateId s = 0; s < num_states(); ++s) {
    if (remap[s] == num_states()) continue;
    for (StateId t : succ_[s])
      if (remap[t] != num_states()) out.add_edge(remap[s], remap[t]);
  }
  return out;
}

bool Koa::operator==(const Koa& other) const {
  return labels_ == other.labels_ && succ_ == other.succ_;
}

Sample::Sample(std::initializer_list<Word> words) {
  for (const auto& w : words) add(w);
}

void Sample::add(const Word& w, std::size_t multiplicity) {
  if (multiplicity == 0) return;
  counts_[w] += multiplicity;
  total_ += multiplicity;
}

std::size_t Sample::count(const Word& w) const {
  auto it = counts_.find(w);
  return it == counts_.end() ? 0 : it->second;
}

std::set<std::string> Sample::alphabet() const {
  std::set<std::string> out;
  for (const auto& [w, n] : counts_) out.insert(w.begin(), w.end());
  return out;
}

Koa complete_koa(const std::set<std::string>& alphabet, std::size_t k) {
  if (alphabet.empty()) throw PreconditionError("complete_koa needs a non-empty alphabet");
  if (k == 0) throw PreconditionError("complete_koa needs k >= 1");
  Koa g;
  g.add_edge(Koa::kSrc, Koa::kSink);
  for (const auto& a : alphabet) {
    StateId first = g.num_states();
    for (std::size_t i = 0; i < k; ++i) g.add_state(Symbol(a));
    g.add_edge(Koa::kSrc, first);
  }
  for (StateId s = 2; s < g.num_states(); ++s)
    for (StateId t = 1; t < g.num_states(); ++t) g.add_edge(s, t);
  return g;
}

bool nfa_accepts(const Koa& g, const Word& w) {
  std::vector<bool> cur(g.num_states(), false);
  cur[Koa::kSrc] = true;
  for (const auto& a : w) {
    std::vector<bool> next(g.num_states(), false);
    bool any = false;
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (!cur[s]) continue;
      for (StateId t : g.successors(s)) {
        if (t != Koa::kSink && g.label(t).name == a) next[t] = any = true;
      }
    }
    if (!any) return false;
    cur.swap(next);
  }
  for (StateId s = 0; s < g.num_states(); ++s)
    if (cur[s] && g.has_edge(s, Koa::kSink)) return true;
  return false;
}

std::optional<std::vector<StateId>> det_run(const Koa& g, const Word& w) {
  if (!g.is_deterministic()) throw PreconditionError("det_run on a non-deterministic automaton");
  std::vector<StateId> run{Koa::kSrc};
  StateId cur = Koa::kSrc;
  for (const auto& a : w) {
    std::optional<StateId> next;
    for (StateId t : g.successors(cur)) {
      if (t != Koa::kSink && g.label(t).name == a) {
        next = t;
        break;
      }
    }
    if (!next) return std::nullopt;
    cur = *next;
    run.push_back(cur);
  }
  if (!g.has_edge(cur, Koa::kSink)) return std::nullopt;
  run.push_back(Koa::kSink);
  return run;
}

Koa prune(const Koa& g, const Sample& s) {
  if (!g.is_deterministic()) throw PreconditionError("prune needs a deterministic automaton");
  std::set<std::pair<StateId, StateId>> witnessed;
  for (const auto& [w, n] : s.words()) {
    auto run = det_run(g, w);
    if (!run) {
      std::string text;
      for (const auto& a : w) text += (text.empty() ? "" : " ") + a;
      throw PreconditionError("prune: sample word '" + text + "' is rejected");
    }
    for (std::size_t i = 0; i + 1 < run->size(); ++i) witnessed.emplace((*run)[i], (*run)[i + 1]);
  }
  Koa out = g;
  for (const auto& e : g.edges())
    if (!witnessed.count(e)) out.remove_edge(e.first, e.second);
  out = out.trimmed();
  out.validate();
  return out;
}

}  // namespace rexinfer
