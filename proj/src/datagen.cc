#include "rexinfer/datagen.h"

#include <algorithm>

#include "rexinfer/error.h"
#include "rexinfer/glushkov.h"
#include "rexinfer/select.h"

namespace rexinfer {

namespace {

enum Op { kConcat, kDisj, kOptional, kStar, kPlus };

class TreeBuilder {
 public:
  TreeBuilder(const OpProbs& ops, std::mt19937_64& rng)
      : rng_(rng), pick_({ops.concat, ops.disj, ops.optional, ops.star, ops.plus}) {}

  Regex build(std::vector<std::string> leaves) {
    Op op = static_cast<Op>(pick_(rng_));
    switch (op) {
      case kOptional:
        return Regex::optional(build(std::move(leaves)));
      case kStar:
        return Regex::star(build(std::move(leaves)));
      case kPlus:
        return Regex::plus(build(std::move(leaves)));
      case kConcat:
      case kDisj:
        break;
    }
    if (leaves.size() == 1) return Regex::atom(Symbol(leaves.front()));
    std::shuffle(leaves.begin(), leaves.end(), rng_);
    std::uniform_int_distribution<std::size_t> at(1, leaves.size() - 1);
    std::size_t split = at(rng_);
    std::vector<std::string> left(leaves.begin(), leaves.begin() + split);
    std::vector<std::string> right(leaves.begin() + split, leaves.end());
    Regex a = build(std::move(left));
    Regex b = build(std::move(right));
    return op == kConcat ? Regex::concat({a, b}) : Regex::disj({a, b});
  }

 private:
  std::mt19937_64& rng_;
  std::discrete_distribution<int> pick_;
};

void walk(const Regex& r, const SampleGenConfig& cfg, std::mt19937_64& rng, Word& out) {
  switch (r.kind()) {
    case RegexKind::kEmptySet:
      throw PreconditionError("gen_sample reached an empty-set subexpression");
    case RegexKind::kEpsilon:
      return;
    case RegexKind::kAtom:
      out.push_back(r.symbol().name);
      return;
    case RegexKind::kConcat:
      for (const auto& c : r.children()) walk(c, cfg, rng, out);
      return;
    case RegexKind::kDisj: {
      std::uniform_int_distribution<std::size_t> pick(0, r.children().size() - 1);
      walk(r.children()[pick(rng)], cfg, rng, out);
      return;
    }
    case RegexKind::kOptional:
      if (std::bernoulli_distribution(cfg.optional_take)(rng)) walk(r.child(), cfg, rng, out);
      return;
    case RegexKind::kPlus: {
      std::bernoulli_distribution again(cfg.loop_continue);
      do {
        walk(r.child(), cfg, rng, out);
      } while (again(rng));
      return;
    }
  }
}

Regex prepare(const Regex& r) {
  Regex n = contains_empty_set(r) ? normalize(r) : r;
  if (n.is(RegexKind::kEmptySet)) throw PreconditionError("gen_sample needs a non-empty language");
  return n;
}

}  // namespace

GenConfig default_gen_config(std::size_t alphabet_size, std::size_t k, std::mt19937_64& rng) {
  if (alphabet_size == 0 || k == 0) throw PreconditionError("default_gen_config needs a non-empty alphabet and k >= 1");
  GenConfig cfg;
  std::uniform_int_distribution<std::size_t> occ(1, k);
  for (std::size_t i = 1; i <= alphabet_size; ++i) {
    cfg.alphabet.push_back("a" + std::to_string(i));
    cfg.occurrences.push_back(occ(rng));
  }
  std::uniform_int_distribution<std::size_t> which(0, alphabet_size - 1);
  cfg.occurrences[which(rng)] = k;
  return cfg;
}

GeneratedExpression gen_expression(const GenConfig& cfg, std::mt19937_64& rng) {
  if (cfg.alphabet.empty() || cfg.alphabet.size() != cfg.occurrences.size())
    throw PreconditionError("gen_expression needs one occurrence count per alphabet symbol");
  const auto& o = cfg.ops;
  for (double p : {o.concat, o.disj, o.optional, o.star, o.plus})
    if (p < 0) throw PreconditionError("gen_expression: negative operator probability");
  if (o.concat + o.disj <= 0) throw PreconditionError("gen_expression: binary operators need positive probability");
  std::vector<std::string> leaves;
  std::size_t k = 0;
  for (std::size_t i = 0; i < cfg.alphabet.size(); ++i) {
    if (cfg.occurrences[i] == 0) throw PreconditionError("gen_expression: occurrence counts must be positive");
    leaves.insert(leaves.end(), cfg.occurrences[i], cfg.alphabet[i]);
    k = std::max(k, cfg.occurrences[i]);
  }
  TreeBuilder builder(o, rng);
  for (std::size_t attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    Regex r = simplify(builder.build(leaves));
    if (!is_deterministic(r)) continue;
    if (stats(r).k > k) throw InvariantError("gen_expression exceeded the occurrence bound: " + render(r));
    GeneratedExpression g;
    g.expr = r;
    g.language_fraction = language_fraction(r, cfg.alphabet.size());
    g.attempts = attempt;
    return g;
  }
  throw Error("gen_expression: no deterministic expression after " + std::to_string(cfg.max_attempts) +
              " attempts");
}

double language_fraction(const Regex& r, std::size_t alphabet_size) {
  std::size_t n = counting_bound(r);
  BigInt words = 0, all = 0, power = 1;
  for (const auto& c : count_words(r, n)) words += c;
  for (std::size_t i = 0; i <= n; ++i) {
    all += power;
    power *= alphabet_size;
  }
  return words.convert_to<double>() / all.convert_to<double>();
}

Word gen_word(const Regex& r, const SampleGenConfig& cfg, std::mt19937_64& rng) {
  Word w;
  walk(prepare(r), cfg, rng, w);
  return w;
}

Sample gen_sample(const Regex& r, const SampleGenConfig& cfg, std::mt19937_64& rng) {
  for (double p : {cfg.loop_continue, cfg.optional_take})
    if (!(p > 0 && p < 1)) throw PreconditionError("gen_sample probabilities must lie in (0,1)");
  Regex e = prepare(r);
  Koa g = glushkov_automaton(e);
  Sample s;
  for (std::size_t i = 0; i < cfg.size; ++i) {
    Word w;
    walk(e, cfg, rng, w);
    if (!nfa_accepts(g, w)) throw InvariantError("gen_sample drew a word outside the language");
    s.add(w);
  }
  return s;
}

Regex hard_family(std::size_t n, HardFamily which) {
  auto a = [](std::size_t i) { return Regex::atom(Symbol("a" + std::to_string(i))); };
  if (which == HardFamily::kR1) {
    if (n < 3) throw PreconditionError("hard family r1 needs n >= 3");
    std::vector<Regex> alts{Regex::concat({a(1), a(2)})};
    for (std::size_t i = 3; i <= n; ++i) alts.push_back(a(i));
    return Regex::plus(Regex::disj(std::move(alts)));
  }
  if (n < 2) throw PreconditionError("hard family r2 needs n >= 2");
  std::vector<Regex> alts;
  for (std::size_t i = 2; i <= n; ++i) alts.push_back(a(i));
  Regex loop = Regex::plus(alts.size() == 1 ? alts.front() : Regex::disj(alts));
  return Regex::concat({loop, a(1), loop});
}

}  // namespace rexinfer
