#ifndef REXINFER_REWRITE_H_
#define REXINFER_REWRITE_H_

#include <cstddef>

#include "rexinfer/koa.h"
#include "rexinfer/regex.h"

namespace rexinfer {

// Relabels the i-th state (in id order) carrying symbol a with a#i.
Koa marking(const Koa& g);

struct SoreTranslation {
  Regex expr;               // over the marked labels of the input
  std::size_t repairs = 0;  // edges or exits added to force a decomposition
};

// Translates a single-occurrence automaton into a single-occurrence
// expression with L(h) ⊆ L(expr). The translation is exact (repairs == 0)
// whenever L(h) is definable by such an expression.
SoreTranslation soa_to_sore(const Koa& h);

// strip(soa_to_sore(marking(g))). Always a super-approximation of L(g);
// exact on Glushkov automata.
Regex koa_to_kore(const Koa& g);

}  // namespace rexinfer

#endif  // REXINFER_REWRITE_H_
