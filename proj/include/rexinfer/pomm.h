#ifndef REXINFER_POMM_H_
#define REXINFER_POMM_H_

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rexinfer/error.h"
#include "rexinfer/koa.h"

namespace rexinfer {

// A k-OA with a transition distribution. alpha[s][t] is defined on the
// edges of `graph` and is zero elsewhere; every row s != sink with an
// outgoing edge sums to 1.
struct Pomm {
  Koa graph;
  std::vector<std::vector<double>> alpha;
};

struct TrainConfig {
  std::size_t max_iters = 100;
  double epsilon = 1e-6;  // relative log-likelihood change
  bool scaled = true;
};

class ZeroProbabilityError : public Error {
 public:
  explicit ZeroProbabilityError(Word w);
  const Word& word() const { return word_; }

 private:
  Word word_;
};

// Complete k-OA over the sample alphabet. The src row follows first-symbol
// frequencies; every other row is drawn from a symmetric Dirichlet(1).
Pomm init(std::size_t k, const Sample& s, std::mt19937_64& rng);

double word_probability(const Pomm& p, const Word& w);
// Multiplicity-weighted; -infinity if some word has probability zero.
double log_likelihood(const Pomm& p, const Sample& s);

// Expectation-maximization over the existing edges. Rows without expected
// counts are left as they are. `trace`, if given, receives the sample
// log-likelihood before each iteration and after the last one. Throws
// ZeroProbabilityError naming the first word the model cannot produce.
Pomm baum_welch(const Pomm& p, const Sample& s, const TrainConfig& cfg,
                std::vector<double>* trace = nullptr);

// Throws InvariantError if some row deviates from 1 by more than tol, some
// entry is negative, or mass sits outside the edge set.
void check_stochastic(const Pomm& p, double tol = 1e-9);

struct DisambiguationResult {
  std::optional<Koa> automaton;  // deterministic, accepts the sample
  std::string failure;
  std::size_t bw_calls = 0;
};

// Greedy breadth-first disambiguation: at each state, keep the most likely
// successor per symbol, give it the mass of the dropped ones and retrain for
// `step.max_iters` iterations. Fails when the sample is no longer accepted.
DisambiguationResult disambiguate(const Pomm& p, const Sample& s, const TrainConfig& step);

}  // namespace rexinfer

#endif  // REXINFER_POMM_H_
