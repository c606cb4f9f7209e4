#ifndef REXINFER_DRIVER_H_
#define REXINFER_DRIVER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rexinfer/koa.h"
#include "rexinfer/pomm.h"
#include "rexinfer/regex.h"
#include "rexinfer/select.h"

namespace rexinfer {

struct InferConfig {
  std::size_t kmax = 4;
  std::size_t restarts = 10;
  // Baum-Welch iterations per disambiguation step. Unset picks the default
  // for the sample alphabet; 0 trains each step to convergence.
  std::optional<std::size_t> bw_iters;
  double bw_epsilon = 1e-6;
  // Initial training of every restart.
  std::size_t train_iters = 100;
  Measure measure = Measure::kSize;
  std::uint64_t seed = 1;
  // 0 reads REXINFER_THREADS, falling back to the hardware concurrency.
  std::size_t threads = 0;
};

// 2 for alphabets of at most 7 symbols, 3 otherwise.
std::size_t default_bw_iters(std::size_t alphabet_size);

// Worker count from REXINFER_THREADS (if set and positive) or the hardware.
std::size_t thread_count(std::size_t requested = 0);

// Seed of restart n at occurrence bound k.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t k, std::size_t n);

enum class RestartStatus { kAccepted, kDuplicate, kDisambiguationFailed, kNonDeterministic, kTrainingFailed };
std::string status_name(RestartStatus s);

struct RestartOutcome {
  std::size_t k = 0;
  std::size_t restart = 0;
  std::uint64_t seed = 0;
  RestartStatus status = RestartStatus::kAccepted;
  std::string detail;
  std::optional<Regex> expr;
  std::optional<Koa> automaton;  // pruned k-OA
  std::size_t bw_calls = 0;
  std::size_t repairs = 0;
};

struct InferResult {
  Candidate best;
  std::vector<Candidate> candidates;  // distinct languages, discovery order
  std::vector<RestartOutcome> restarts;  // ordered by (k, restart)
  std::size_t bw_iters = 0;
};

// The full grid of (k, restart) runs: init, train, disambiguate, prune,
// translate, simplify; deterministic results that are new up to language
// equivalence become candidates. Throws PreconditionError on an empty
// sample and InvariantError if a result rejects a sample word.
InferResult idregex(const Sample& s, const InferConfig& cfg);

// Nested disjunction over the prefix tree of the distinct words of s, with
// `?` at internal nodes that end a word. Accepts exactly those words.
Regex prefix_tree_expression(const Sample& s);

struct OracleResult {
  Regex expr;
  bool fell_back = false;  // no consistent enumerated expression
  std::size_t enumerated = 0;  // distinct languages considered
  std::size_t reached_length = 0;  // longest expression length enumerated
};

// Enumerates deterministic k-OREs over the sample alphabet up to `budget`
// printed length, one per language, ordered by |L^{<=B}| (B = 2 budget + 1),
// then length, then rendering, and returns the first that accepts every
// sample word. Falls back to prefix_tree_expression. Requires at most 3
// symbols, k <= 2 and budget <= 10 k |Σ|.
OracleResult oracle_learn(const Sample& s, std::size_t k, std::size_t budget);
// Largest budget accepted for this sample and k.
std::size_t max_oracle_budget(const Sample& s, std::size_t k);

}  // namespace rexinfer

#endif  // REXINFER_DRIVER_H_
