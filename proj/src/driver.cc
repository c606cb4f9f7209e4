#include "rexinfer/driver.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "rexinfer/error.h"
#include "rexinfer/glushkov.h"
#include "rexinfer/rewrite.h"

namespace rexinfer {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::string> sorted_alphabet(const Sample& s) {
  auto a = s.alphabet();
  return {a.begin(), a.end()};
}

void check_sound(const Regex& r, const Sample& s) {
  Regex e = contains_empty_set(r) ? normalize(r) : r;
  if (e.is(RegexKind::kEmptySet)) throw InvariantError("inferred expression has an empty language");
  Koa g = glushkov_automaton(e);
  for (const auto& [w, m] : s.words())
    if (!nfa_accepts(g, w)) throw InvariantError("inferred expression " + render(r) + " rejects a sample word");
}

RestartOutcome run_restart(const Sample& s, std::size_t k, std::size_t n, const InferConfig& cfg,
                           std::size_t ell) {
  RestartOutcome out;
  out.k = k;
  out.restart = n;
  out.seed = restart_seed(cfg.seed, k, n);
  std::mt19937_64 rng(out.seed);
  TrainConfig train{cfg.train_iters, cfg.bw_epsilon, true};
  TrainConfig step{ell == 0 ? std::size_t{1000} : ell, cfg.bw_epsilon, true};
  Pomm p = init(k, s, rng);
  try {
    p = baum_welch(p, s, train);
  } catch (const ZeroProbabilityError& e) {
    out.status = RestartStatus::kTrainingFailed;
    out.detail = e.what();
    return out;
  }
  auto d = disambiguate(p, s, step);
  out.bw_calls = d.bw_calls;
  if (!d.automaton) {
    out.status = RestartStatus::kDisambiguationFailed;
    out.detail = d.failure;
    return out;
  }
  Koa g = prune(*d.automaton, s);
  auto t = soa_to_sore(marking(g));
  out.repairs = t.repairs;
  Regex r = simplify(strip(t.expr));
  out.automaton = std::move(g);
  out.expr = r;
  check_sound(r, s);
  if (!is_deterministic(r)) {
    out.status = RestartStatus::kNonDeterministic;
    out.detail = render(r);
  }
  return out;
}

}  // namespace

std::size_t default_bw_iters(std::size_t alphabet_size) { return alphabet_size <= 7 ? 2 : 3; }

std::size_t thread_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("REXINFER_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t k, std::size_t n) {
  return splitmix64(splitmix64(seed ^ splitmix64(k)) + n);
}

std::string status_name(RestartStatus s) {
  switch (s) {
    case RestartStatus::kAccepted:
      return "accepted";
    case RestartStatus::kDuplicate:
      return "duplicate";
    case RestartStatus::kDisambiguationFailed:
      return "disambiguation-failed";
    case RestartStatus::kNonDeterministic:
      return "non-deterministic";
    case RestartStatus::kTrainingFailed:
      return "training-failed";
  }
  return "unknown";
}

InferResult idregex(const Sample& s, const InferConfig& cfg) {
  if (s.empty()) throw PreconditionError("idregex needs a non-empty sample");
  if (cfg.kmax == 0 || cfg.restarts == 0) throw PreconditionError("idregex needs kmax >= 1 and restarts >= 1");
  InferResult result;
  auto sigma = sorted_alphabet(s);
  result.bw_iters = cfg.bw_iters.value_or(default_bw_iters(sigma.size()));

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t k = 1; k <= cfg.kmax; ++k)
    for (std::size_t n = 0; n < cfg.restarts; ++n) jobs.push_back({k, n});
  result.restarts.resize(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        result.restarts[i] = run_restart(s, jobs[i].first, jobs[i].second, cfg, result.bw_iters);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t workers = std::min(thread_count(cfg.threads), jobs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::set<std::string> languages;
  for (auto& o : result.restarts) {
    if (o.status != RestartStatus::kAccepted) continue;
    if (!languages.insert(canonical_key(to_dfa(*o.expr, sigma))).second) {
      o.status = RestartStatus::kDuplicate;
      continue;
    }
    result.candidates.push_back(make_candidate(*o.expr, s));
  }
  if (result.candidates.empty()) throw InvariantError("idregex produced no deterministic candidate");
  result.best = best(result.candidates, cfg.measure);
  return result;
}

Regex prefix_tree_expression(const Sample& s) {
  if (s.empty()) throw PreconditionError("prefix_tree_expression needs a non-empty sample");
  std::vector<Word> words;
  for (const auto& [w, m] : s.words()) words.push_back(w);
  // words is sorted, so every node's words form a contiguous range.
  auto build = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t depth) -> Regex {
    bool ends = false;
    std::vector<Regex> alts;
    std::size_t i = lo;
    while (i < hi) {
      if (words[i].size() == depth) {
        ends = true;
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < hi && words[j].size() > depth && words[j][depth] == words[i][depth]) ++j;
      Regex head = Regex::atom(words[i][depth]);
      Regex tail = self(self, i, j, depth + 1);
      alts.push_back(tail.is(RegexKind::kEpsilon) ? head : Regex::concat({head, tail}));
      i = j;
    }
    if (alts.empty()) return Regex::epsilon();
    Regex r = Regex::disj(std::move(alts));
    return ends ? Regex::optional(r) : r;
  };
  return build(build, 0, words.size(), 0);
}

std::size_t max_oracle_budget(const Sample& s, std::size_t k) { return 10 * k * s.alphabet().size(); }

namespace {

constexpr std::size_t kEnumerationCap = 20000;

struct Entry {
  Regex r;
  std::string language;
};

class Enumerator {
 public:
  Enumerator(std::vector<std::string> sigma, std::size_t k) : sigma_(std::move(sigma)), k_(k) {}

  // Fills pools up to `budget`, stopping early at the entry cap. Returns
  // the longest length completed. Every construction is generated once, at
  // the step of its unparenthesized length, and committed at its real one.
  std::size_t run(std::size_t budget) {
    pools_.assign(budget + 1, {});
    pending_.assign(budget + 1, {});
    std::size_t reached = 0;
    for (std::size_t len = 1; len <= budget; ++len) {
      if (len == 1)
        for (const auto& a : sigma_) queue(Regex::atom(a));
      for (const auto& e : pools_[len - 1]) {
        if (!nullable(e.r)) queue(Regex::optional(e.r));
        if (!e.r.is(RegexKind::kPlus) && !e.r.is(RegexKind::kOptional)) queue(Regex::plus(e.r));
      }
      for (std::size_t la = 1; la + 2 <= len; ++la) {
        for (const auto& a : pools_[la]) {
          for (const auto& b : pools_[len - 1 - la]) {
            if (!b.r.is(RegexKind::kConcat)) queue(Regex::concat({a.r, b.r}));
            if (!b.r.is(RegexKind::kDisj) && !nullable(a.r) && !nullable(b.r)) queue(Regex::disj({a.r, b.r}));
          }
        }
      }
      for (const auto& r : pending_[len]) {
        commit(r, len);
        if (count_ > kEnumerationCap) return reached;
      }
      pending_[len].clear();
      reached = len;
    }
    return reached;
  }

  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    for (const auto& pool : pools_) out.insert(out.end(), pool.begin(), pool.end());
    return out;
  }

 private:
  void queue(const Regex& r) {
    auto st = stats(r);
    if (st.length < pending_.size() && st.k <= k_) pending_[st.length].push_back(r);
  }

  void commit(const Regex& r, std::size_t len) {
    std::string occ;
    for (const auto& a : sigma_) {
      std::size_t c = 0;
      count_occ(r, a, c);
      occ += std::to_string(c) + ",";
    }
    if (!is_deterministic(r)) return;
    std::string language = canonical_key(to_dfa(r, sigma_));
    if (!seen_.insert(language + "|" + occ).second) return;
    pools_[len].push_back({r, language});
    ++count_;
  }

  static void count_occ(const Regex& r, const std::string& a, std::size_t& c) {
    if (r.is(RegexKind::kAtom)) {
      if (r.symbol().name == a) ++c;
      return;
    }
    for (const auto& ch : r.children()) count_occ(ch, a, c);
  }

  std::vector<std::string> sigma_;
  std::size_t k_;
  std::vector<std::vector<Entry>> pools_;
  std::vector<std::vector<Regex>> pending_;
  std::set<std::string> seen_;
  std::size_t count_ = 0;
};

}  // namespace

OracleResult oracle_learn(const Sample& s, std::size_t k, std::size_t budget) {
  if (s.empty()) throw PreconditionError("oracle_learn needs a non-empty sample");
  auto sigma = sorted_alphabet(s);
  if (sigma.size() > 3 || k == 0 || k > 2)
    throw PreconditionError("oracle_learn is limited to at most 3 symbols and 1 <= k <= 2");
  if (budget > max_oracle_budget(s, k))
    throw PreconditionError("oracle_learn budget exceeds " + std::to_string(max_oracle_budget(s, k)));
  OracleResult out;
  if (sigma.empty()) {
    out.expr = Regex::epsilon();
    return out;
  }
  Enumerator en(sigma, k);
  out.reached_length = en.run(budget);

  // One expression per language: the first found is the shortest.
  std::map<std::string, Regex> by_language;
  for (const auto& e : en.entries()) by_language.emplace(e.language, e.r);
  struct Ranked {
    BigInt size;
    std::size_t length;
    std::string text;
    Regex r;
  };
  const std::size_t bound = 2 * budget + 1;
  std::vector<Ranked> ranked;
  for (const auto& [lang, r] : by_language) {
    BigInt n = 0;
    for (const auto& c : count_words(r, bound)) n += c;
    ranked.push_back({n, stats(r).length, render(r), r});
  }
  out.enumerated = ranked.size();
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.size != b.size) return a.size < b.size;
    if (a.length != b.length) return a.length < b.length;
    return a.text < b.text;
  });
  for (const auto& c : ranked) {
    Koa g = glushkov_automaton(c.r);
    bool consistent = true;
    for (const auto& [w, m] : s.words())
      if (!nfa_accepts(g, w)) {
        consistent = false;
        break;
      }
    if (consistent) {
      out.expr = c.r;
      return out;
    }
  }
  out.expr = prefix_tree_expression(s);
  out.fell_back = true;
  return out;
}

}  // namespace rexinfer
