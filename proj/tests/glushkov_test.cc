#include "rexinfer/glushkov.h"

#include <gtest/gtest.h>

#include "oracles.h"
#include "rexinfer/error.h"

namespace rexinfer {
namespace {

using testing::all_words;
using testing::letters;
using testing::naive_accepts;
using testing::random_regex;
using testing::word;

Symbol m(const char* name, int i) { return Symbol(name, i); }

TEST(PositionSets, MarkedExample) {
  auto p = position_sets(parse("a#1 a#2? b#1+"));
  EXPECT_FALSE(p.nullable);
  EXPECT_EQ(p.first, (std::set<Symbol>{m("a", 1)}));
  EXPECT_EQ(p.last, (std::set<Symbol>{m("b", 1)}));
  EXPECT_EQ(p.follow[m("a", 1)], (std::set<Symbol>{m("a", 2), m("b", 1)}));
  EXPECT_EQ(p.follow[m("a", 2)], (std::set<Symbol>{m("b", 1)}));
  EXPECT_EQ(p.follow[m("b", 1)], (std::set<Symbol>{m("b", 1)}));
}

TEST(PositionSets, SecondExample) {
  auto p = position_sets(parse("b#1 c#1? a#1 (b#2 a#2+)?"));
  EXPECT_EQ(p.first, (std::set<Symbol>{m("b", 1)}));
  EXPECT_EQ(p.last, (std::set<Symbol>{m("a", 1), m("a", 2)}));
  EXPECT_EQ(p.follow[m("b", 1)], (std::set<Symbol>{m("c", 1), m("a", 1)}));
  EXPECT_EQ(p.follow[m("a", 1)], (std::set<Symbol>{m("b", 2)}));
  EXPECT_EQ(p.follow[m("b", 2)], (std::set<Symbol>{m("a", 2)}));
  EXPECT_EQ(p.follow[m("a", 2)], (std::set<Symbol>{m("a", 2)}));
}

TEST(PositionSets, EpsilonAndRepeatedSymbols) {
  auto p = position_sets(Regex::epsilon());
  EXPECT_TRUE(p.nullable);
  EXPECT_TRUE(p.first.empty());
  EXPECT_TRUE(p.last.empty());
  EXPECT_THROW(position_sets(parse("a a")), PreconditionError);
}

TEST(GlushkovAutomaton, Examples) {
  Koa g = glushkov_automaton(parse("a a? b+"));
  ASSERT_EQ(g.num_states(), 5u);
  EXPECT_EQ(g.label(2).name, "a");
  EXPECT_EQ(g.label(3).name, "a");
  EXPECT_EQ(g.label(4).name, "b");
  std::vector<std::pair<StateId, StateId>> expected{{0, 2}, {2, 3}, {2, 4}, {3, 4}, {4, 1}, {4, 4}};
  EXPECT_EQ(g.edges(), expected);
  EXPECT_EQ(g.max_label_multiplicity(), 2u);

  Koa e = glushkov_automaton(Regex::epsilon());
  EXPECT_EQ(e.num_states(), 2u);
  EXPECT_EQ(e.edges(), (std::vector<std::pair<StateId, StateId>>{{0, 1}}));

  Koa d = glushkov_automaton(parse("a | b"));
  EXPECT_EQ(d.edges(), (std::vector<std::pair<StateId, StateId>>{{0, 2}, {0, 3}, {2, 1}, {3, 1}}));

  EXPECT_THROW(glushkov_automaton(Regex::empty_set()), PreconditionError);
}

TEST(Determinism, Examples) {
  EXPECT_FALSE(is_deterministic(parse("((a | b)+)? a")));
  EXPECT_TRUE(is_deterministic(parse("b* a (b* a)*")));
  EXPECT_FALSE(is_deterministic(parse("((b c? a)? b?)+")));
  EXPECT_TRUE(is_deterministic(parse("a a? b+")));
  EXPECT_TRUE(is_deterministic(parse("b c? a (b a+)?")));
}

TEST(CountWords, Examples) {
  auto c = count_words(parse("a a? b+"), 3);
  EXPECT_EQ(c, (std::vector<BigInt>{0, 0, 1, 2}));
  auto e = count_words(Regex::epsilon(), 4);
  EXPECT_EQ(e, (std::vector<BigInt>{1, 0, 0, 0, 0}));
  auto seven = count_words(parse("a a? b+"), 7);
  BigInt total = 0;
  for (const auto& x : seven) total += x;
  EXPECT_EQ(total, 11);
  EXPECT_EQ(count_words(Regex::empty_set(), 2), (std::vector<BigInt>{0, 0, 0}));
}

TEST(Equivalence, Examples) {
  EXPECT_TRUE(equivalent(parse("(a+)?"), parse("(a?)+")));
  EXPECT_FALSE(equivalent(parse("a+ b+"), parse("a a? b+")));
  EXPECT_EQ(distinguishing_word(parse("a+ b+"), parse("a a? b+")), word("aaab"));
  EXPECT_TRUE(equivalent(parse("a (b | c)"), parse("a (b | c)")));
  EXPECT_TRUE(included(parse("a a? b+"), parse("a+ b+")));
  EXPECT_FALSE(included(parse("a+ b+"), parse("a a? b+")));
}

TEST(Accepts, Examples) {
  EXPECT_TRUE(accepts(parse("a a? b+"), word("aab")));
  EXPECT_FALSE(accepts(parse("a a? b+"), {}));
  EXPECT_TRUE(accepts(parse("(a1 a2 | a3 | a4)+"), Word{"a3", "a1", "a2"}));
  EXPECT_FALSE(accepts(Regex::empty_set(), {}));
}

class GlushkovProperties : public ::testing::TestWithParam<int> {};

TEST_P(GlushkovProperties, AgreesWithNaiveMembership) {
  std::mt19937_64 rng(3000 + GetParam());
  auto words = all_words(letters(3), 8);
  for (int i = 0; i < 10; ++i) {
    Regex r = random_regex(rng, letters(3), 1 + static_cast<int>(rng() % 6), true);
    bool nonempty = !normalize(r).is(RegexKind::kEmptySet);
    std::vector<BigInt> counts = count_words(r, 8);
    std::vector<BigInt> brute(9);
    for (const auto& w : words) {
      bool expected = naive_accepts(r, w);
      ASSERT_EQ(accepts(r, w), expected) << render(r);
      if (nonempty) ASSERT_EQ(nfa_accepts(glushkov_automaton(r), w), expected) << render(r);
      if (expected) brute[w.size()] += 1;
    }
    EXPECT_EQ(counts, brute) << render(r);
    if (nonempty && is_deterministic(r)) EXPECT_TRUE(glushkov_automaton(r).is_deterministic());
  }
}

TEST_P(GlushkovProperties, EquivalenceAgreesWithEnumeration) {
  std::mt19937_64 rng(4000 + GetParam());
  for (int i = 0; i < 10; ++i) {
    Regex r1 = random_regex(rng, letters(2), 1 + static_cast<int>(rng() % 4));
    Regex r2 = random_regex(rng, letters(2), 1 + static_cast<int>(rng() % 4));
    EXPECT_TRUE(equivalent(r1, r1));
    EXPECT_EQ(equivalent(r1, r2), equivalent(r2, r1));
    std::size_t bound = 2 * (stats(r1).occ + stats(r2).occ) + 1;
    bool same = true;
    for (const auto& w : all_words(letters(2), std::min<std::size_t>(bound, 10)))
      same = same && naive_accepts(r1, w) == naive_accepts(r2, w);
    if (equivalent(r1, r2)) EXPECT_TRUE(same) << render(r1) << " / " << render(r2);
    auto witness = distinguishing_word(r1, r2);
    if (witness) EXPECT_NE(naive_accepts(r1, *witness), naive_accepts(r2, *witness));
    Dfa d1 = to_dfa(r1, letters(2));
    Dfa d2 = to_dfa(r2, letters(2));
    EXPECT_EQ(canonical_key(d1) == canonical_key(d2), equivalent(r1, r2)) << render(r1) << " / " << render(r2);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, GlushkovProperties, ::testing::Range(0, 8));

}  // namespace
}  // namespace rexinfer
