#ifndef REXINFER_DATAGEN_H_
#define REXINFER_DATAGEN_H_

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "rexinfer/koa.h"
#include "rexinfer/regex.h"

namespace rexinfer {

struct OpProbs {
  double concat = 7.0 / 20;
  double disj = 7.0 / 20;
  double optional = 1.0 / 10;
  double star = 1.0 / 10;
  double plus = 1.0 / 10;
};

struct GenConfig {
  std::vector<std::string> alphabet;
  // Occurrences of each alphabet symbol; k is the maximum.
  std::vector<std::size_t> occurrences;
  OpProbs ops;
  std::size_t max_attempts = 100000;
};

// A GenConfig over a1..an where every symbol occurs between 1 and k times.
GenConfig default_gen_config(std::size_t alphabet_size, std::size_t k, std::mt19937_64& rng);

struct GeneratedExpression {
  Regex expr;
  // |L^{<=n}| / |Σ^{<=n}| for n = counting_bound(expr).
  double language_fraction = 0;
  std::size_t attempts = 0;
};

// Random expression tree over the occurrence multiset, simplified and
// rejected until deterministic. Throws Error when max_attempts is exceeded.
GeneratedExpression gen_expression(const GenConfig& cfg, std::mt19937_64& rng);

// |L(r)^{<=n}| / |Σ^{<=n}| with n = counting_bound(r) and |Σ| = alphabet_size.
double language_fraction(const Regex& r, std::size_t alphabet_size);

struct SampleGenConfig {
  std::size_t size = 100;
  double loop_continue = 2.0 / 3;
  double optional_take = 1.0 / 2;
};

// Random walk over the expression: disjuncts are uniform, optionals are
// taken with optional_take and loops repeat with loop_continue.
Sample gen_sample(const Regex& r, const SampleGenConfig& cfg, std::mt19937_64& rng);
Word gen_word(const Regex& r, const SampleGenConfig& cfg, std::mt19937_64& rng);

enum class HardFamily { kR1, kR2 };

// r1 = (a1 a2 | a3 | .. | an)+ for n >= 3 and
// r2 = (a2 | .. | an)+ a1 (a2 | .. | an)+ for n >= 2.
Regex hard_family(std::size_t n, HardFamily which);

}  // namespace rexinfer

#endif  // REXINFER_DATAGEN_H_
