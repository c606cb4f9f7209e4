#ifndef REXINFER_SELECT_H_
#define REXINFER_SELECT_H_

#include <cstddef>
#include <string>
#include <vector>

#include "rexinfer/glushkov.h"
#include "rexinfer/koa.h"
#include "rexinfer/regex.h"

namespace rexinfer {

enum class Measure { kSize, kMdl };

Measure parse_measure(const std::string& name);
std::string measure_name(Measure m);

struct Candidate {
  Regex expr;
  std::size_t k = 0;
  BigInt language_size;
  double mdl_cost = 0;
  std::size_t expr_length = 0;
};

// Bound used for counting: twice the number of symbol occurrences, plus one.
std::size_t counting_bound(const Regex& r);

// |L(r)^{<= n}| for n = counting_bound(r). Requires a deterministic r.
BigInt language_size(const Regex& r);

// Data cost: for every length i <= n with sample words of that length,
// 2 log2 i + log2 C(|L^{=i}|, |S^{=i}|), where |S^{=i}| counts distinct
// words and 2 log2 0 is taken as 0.
double mdl_data_cost(const Regex& r, const Sample& s);
// Data cost plus the printed length of r.
double mdl_cost(const Regex& r, const Sample& s);

Candidate make_candidate(const Regex& r, const Sample& s);

// Minimal measure, then shorter expression, then smaller rendering.
const Candidate& best(const std::vector<Candidate>& candidates, Measure m);

}  // namespace rexinfer

#endif  // REXINFER_SELECT_H_
