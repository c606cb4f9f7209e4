#include "rexinfer/pomm.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

namespace rexinfer {

namespace {

std::string join(const Word& w) {
  std::string out;
  for (const auto& a : w) out += (out.empty() ? "" : " ") + a;
  return out;
}

using Groups = std::map<std::string, std::vector<StateId>>;

Groups states_by_label(const Koa& g) {
  Groups groups;
  for (StateId s = 2; s < g.num_states(); ++s) groups[g.label(s).name].push_back(s);
  return groups;
}

// Scaled forward-backward over one word, restricted at each position to the
// states carrying that position's symbol.
struct Lattice {
  std::vector<const std::vector<StateId>*> layer;
  std::vector<std::vector<double>> fwd;  // normalized per position
  std::vector<std::vector<double>> bwd;
  std::vector<double> scale;
  double z = 0;  // end normalizer
  double log_prob = -std::numeric_limits<double>::infinity();

  bool forward(const Pomm& p, const Groups& groups, const Word& w, bool scaled) {
    const auto& alpha = p.alpha;
    if (w.empty()) {
      z = alpha[Koa::kSrc][Koa::kSink];
      if (z <= 0) return false;
      log_prob = std::log(z);
      return true;
    }
    static const std::vector<StateId> kNone;
    layer.clear();
    for (const auto& a : w) {
      auto it = groups.find(a);
      layer.push_back(it == groups.end() ? &kNone : &it->second);
    }
    const std::size_t n = w.size();
    fwd.assign(n, {});
    scale.assign(n, 1.0);
    double log_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& cur = *layer[i];
      auto& f = fwd[i];
      f.assign(cur.size(), 0.0);
      for (std::size_t y = 0; y < cur.size(); ++y) {
        if (i == 0) {
          f[y] = alpha[Koa::kSrc][cur[y]];
        } else {
          const auto& prev = *layer[i - 1];
          double acc = 0;
          for (std::size_t x = 0; x < prev.size(); ++x) acc += fwd[i - 1][x] * alpha[prev[x]][cur[y]];
          f[y] = acc;
        }
      }
      double c = 0;
      for (double v : f) c += v;
      if (!(c > 0)) return false;
      if (scaled) {
        for (double& v : f) v /= c;
        scale[i] = c;
        log_sum += std::log(c);
      }
    }
    z = 0;
    const auto& last = *layer[n - 1];
    for (std::size_t x = 0; x < last.size(); ++x) z += fwd[n - 1][x] * alpha[last[x]][Koa::kSink];
    if (!(z > 0)) return false;
    log_prob = scaled ? log_sum + std::log(z) : std::log(z);
    return true;
  }

  void backward(const Pomm& p) {
    const auto& alpha = p.alpha;
    const std::size_t n = layer.size();
    bwd.assign(n, {});
    const auto& last = *layer[n - 1];
    bwd[n - 1].resize(last.size());
    for (std::size_t x = 0; x < last.size(); ++x) bwd[n - 1][x] = alpha[last[x]][Koa::kSink] / z;
    for (std::size_t i = n - 1; i-- > 0;) {
      const auto& cur = *layer[i];
      const auto& nxt = *layer[i + 1];
      bwd[i].assign(cur.size(), 0.0);
      for (std::size_t x = 0; x < cur.size(); ++x) {
        double acc = 0;
        for (std::size_t y = 0; y < nxt.size(); ++y) acc += alpha[cur[x]][nxt[y]] * bwd[i + 1][y];
        bwd[i][x] = acc / scale[i + 1];
      }
    }
  }
};

void normalize_row(std::vector<double>& row) {
  double sum = 0;
  for (double v : row) sum += v;
  if (sum > 0)
    for (double& v : row) v /= sum;
}

}  // namespace

ZeroProbabilityError::ZeroProbabilityError(Word w)
    : Error("word '" + join(w) + "' has probability zero under the model"), word_(std::move(w)) {}

Pomm init(std::size_t k, const Sample& s, std::mt19937_64& rng) {
  if (s.empty()) throw PreconditionError("init needs a non-empty sample");
  Pomm p;
  auto sigma = s.alphabet();
  if (sigma.empty()) {
    p.graph.add_edge(Koa::kSrc, Koa::kSink);
  } else {
    p.graph = complete_koa(sigma, k);
  }
  const std::size_t n = p.graph.num_states();
  p.alpha.assign(n, std::vector<double>(n, 0.0));

  const double total = static_cast<double>(s.size());
  std::map<std::string, double> starts;
  for (const auto& [w, m] : s.words()) {
    if (w.empty()) {
      p.alpha[Koa::kSrc][Koa::kSink] += static_cast<double>(m) / total;
    } else {
      starts[w.front()] += static_cast<double>(m) / total;
    }
  }
  std::map<std::string, std::size_t> start_states;
  for (StateId t : p.graph.successors(Koa::kSrc))
    if (t != Koa::kSink) ++start_states[p.graph.label(t).name];
  for (StateId t : p.graph.successors(Koa::kSrc)) {
    if (t == Koa::kSink) continue;
    const auto& a = p.graph.label(t).name;
    p.alpha[Koa::kSrc][t] = starts[a] / static_cast<double>(start_states[a]);
  }

  std::gamma_distribution<double> gamma(1.0, 1.0);
  for (StateId x = 2; x < n; ++x) {
    const auto& out = p.graph.successors(x);
    double sum = 0;
    for (StateId t : out) sum += p.alpha[x][t] = gamma(rng);
    for (StateId t : out) p.alpha[x][t] /= sum;
  }
  return p;
}

double word_probability(const Pomm& p, const Word& w) {
  Lattice lat;
  if (!lat.forward(p, states_by_label(p.graph), w, true)) return 0.0;
  return std::exp(lat.log_prob);
}

double log_likelihood(const Pomm& p, const Sample& s) {
  auto groups = states_by_label(p.graph);
  double ll = 0;
  Lattice lat;
  for (const auto& [w, m] : s.words()) {
    if (!lat.forward(p, groups, w, true)) return -std::numeric_limits<double>::infinity();
    ll += static_cast<double>(m) * lat.log_prob;
  }
  return ll;
}

Pomm baum_welch(const Pomm& p, const Sample& s, const TrainConfig& cfg, std::vector<double>* trace) {
  if (cfg.max_iters < 1) throw PreconditionError("baum_welch needs max_iters >= 1");
  if (!(cfg.epsilon > 0)) throw PreconditionError("baum_welch needs epsilon > 0");
  Pomm cur = p;
  const std::size_t n = cur.graph.num_states();
  auto groups = states_by_label(cur.graph);
  Lattice lat;
  double prev_ll = 0;
  for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
    std::vector<std::vector<double>> expected(n, std::vector<double>(n, 0.0));
    double ll = 0;
    for (const auto& [w, m] : s.words()) {
      if (!lat.forward(cur, groups, w, cfg.scaled)) throw ZeroProbabilityError(w);
      const double weight = static_cast<double>(m);
      ll += weight * lat.log_prob;
      if (w.empty()) {
        expected[Koa::kSrc][Koa::kSink] += weight;
        continue;
      }
      lat.backward(cur);
      const std::size_t len = w.size();
      const auto& first = *lat.layer[0];
      for (std::size_t y = 0; y < first.size(); ++y)
        expected[Koa::kSrc][first[y]] += weight * lat.fwd[0][y] * lat.bwd[0][y];
      for (std::size_t i = 0; i + 1 < len; ++i) {
        const auto& a = *lat.layer[i];
        const auto& b = *lat.layer[i + 1];
        const double inv = weight / lat.scale[i + 1];
        for (std::size_t x = 0; x < a.size(); ++x) {
          const double fx = lat.fwd[i][x] * inv;
          if (fx == 0) continue;
          const auto& row = cur.alpha[a[x]];
          auto& e = expected[a[x]];
          for (std::size_t y = 0; y < b.size(); ++y) e[b[y]] += fx * row[b[y]] * lat.bwd[i + 1][y];
        }
      }
      const auto& last = *lat.layer[len - 1];
      for (std::size_t x = 0; x < last.size(); ++x)
        expected[last[x]][Koa::kSink] += weight * lat.fwd[len - 1][x] * cur.alpha[last[x]][Koa::kSink] / lat.z;
    }
    if (trace) trace->push_back(ll);
    for (StateId x = 0; x < n; ++x) {
      double total = 0;
      for (StateId t : cur.graph.successors(x)) total += expected[x][t];
      if (!(total > 0)) continue;
      for (StateId t : cur.graph.successors(x)) cur.alpha[x][t] = expected[x][t] / total;
    }
    if (iter > 0 && std::abs(ll - prev_ll) <= cfg.epsilon * std::max(1.0, std::abs(prev_ll))) {
      prev_ll = ll;
      break;
    }
    prev_ll = ll;
  }
  if (trace) trace->push_back(log_likelihood(cur, s));
  return cur;
}

void check_stochastic(const Pomm& p, double tol) {
  const std::size_t n = p.graph.num_states();
  if (p.alpha.size() != n) throw InvariantError("alpha has the wrong number of rows");
  for (StateId x = 0; x < n; ++x) {
    if (p.alpha[x].size() != n) throw InvariantError("alpha has a row of the wrong width");
    double sum = 0;
    for (StateId t = 0; t < n; ++t) {
      double v = p.alpha[x][t];
      if (v < 0) throw InvariantError("negative transition probability");
      if (v != 0 && !p.graph.has_edge(x, t)) throw InvariantError("probability mass outside the edge set");
      sum += v;
    }
    if (x == Koa::kSink || p.graph.successors(x).empty()) continue;
    if (std::abs(sum - 1.0) > tol)
      throw InvariantError("row " + std::to_string(x) + " sums to " + std::to_string(sum));
  }
}

DisambiguationResult disambiguate(const Pomm& p, const Sample& s, const TrainConfig& step) {
  DisambiguationResult result;
  Pomm cur = p;
  const std::size_t n = cur.graph.num_states();

  auto resolve = [&](StateId x) -> bool {
    std::map<std::string, std::vector<StateId>> by_label;
    for (StateId t : cur.graph.successors(x))
      if (t != Koa::kSink) by_label[cur.graph.label(t).name].push_back(t);
    for (const auto& [a, group] : by_label) {
      if (group.size() < 2) continue;
      StateId keep = group.front();
      double mass = 0;
      for (StateId t : group) {
        mass += cur.alpha[x][t];
        if (cur.alpha[x][t] > cur.alpha[x][keep]) keep = t;
      }
      for (StateId t : group) {
        if (t == keep) continue;
        cur.graph.remove_edge(x, t);
        cur.alpha[x][t] = 0.0;
      }
      cur.alpha[x][keep] = mass;
      normalize_row(cur.alpha[x]);
      try {
        cur = baum_welch(cur, s, step);
      } catch (const ZeroProbabilityError& e) {
        result.failure = e.what();
        ++result.bw_calls;
        return false;
      }
      ++result.bw_calls;
      for (const auto& [w, m] : s.words()) {
        if (!nfa_accepts(cur.graph, w)) {
          result.failure = "word '" + join(w) + "' rejected after disambiguating state " + std::to_string(x);
          return false;
        }
      }
    }
    return true;
  };

  if (!resolve(Koa::kSrc)) return result;

  std::vector<bool> done(n, false);
  std::vector<bool> queued(n, false);
  std::deque<StateId> queue;
  for (StateId t : cur.graph.successors(Koa::kSrc)) {
    if (t != Koa::kSink && cur.alpha[Koa::kSrc][t] > 0) {
      queue.push_back(t);
      queued[t] = true;
    }
  }
  while (!queue.empty()) {
    StateId x = queue.front();
    queue.pop_front();
    if (!resolve(x)) return result;
    done[x] = true;
    for (StateId t : cur.graph.successors(x)) {
      if (t == Koa::kSink || done[t] || queued[t]) continue;
      queue.push_back(t);
      queued[t] = true;
    }
  }
  Koa g = cur.graph.trimmed();
  if (!g.is_deterministic()) {
    // States never reached from a positive start are dropped with their
    // start edges.
    for (StateId t : std::vector<StateId>(cur.graph.successors(Koa::kSrc)))
      if (t != Koa::kSink && !done[t]) cur.graph.remove_edge(Koa::kSrc, t);
    g = cur.graph.trimmed();
  }
  if (!g.is_deterministic()) throw InvariantError("disambiguation left a non-deterministic state");
  for (const auto& [w, m] : s.words()) {
    if (!nfa_accepts(g, w)) {
      result.failure = "word '" + join(w) + "' rejected by the disambiguated automaton";
      return result;
    }
  }
  result.automaton = std::move(g);
  return result;
}

}  // namespace rexinfer
