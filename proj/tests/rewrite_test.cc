#include "rexinfer/rewrite.h"

#include <gtest/gtest.h>

#include <functional>

#include "oracles.h"
#include "rexinfer/error.h"
#include "rexinfer/glushkov.h"

namespace rexinfer {
namespace {

using testing::all_words;
using testing::letters;
using testing::random_koa;
using testing::random_regex;
using testing::word;

TEST(Marking, IndexesCopiesInStateOrder) {
  Koa h = marking(glushkov_automaton(parse("a a? b+")));
  EXPECT_EQ(h.label(2), Symbol("a", 1));
  EXPECT_EQ(h.label(3), Symbol("a", 2));
  EXPECT_EQ(h.label(4), Symbol("b", 1));
  Koa one = marking(glushkov_automaton(parse("a b")));
  EXPECT_EQ(one.label(2), Symbol("a", 1));
  EXPECT_EQ(one.edges(), glushkov_automaton(parse("a b")).edges());
}

TEST(SoaToSore, MarkedGlushkovExample) {
  auto t = soa_to_sore(marking(glushkov_automaton(parse("a a? b+"))));
  EXPECT_EQ(render(t.expr), "a#1 a#2? b#1+");
  EXPECT_EQ(t.repairs, 0u);
}

TEST(SoaToSore, NestedLoops) {
  Regex target = parse("((b? (a | c))+ d)+ e");
  auto t = soa_to_sore(glushkov_automaton(target));
  EXPECT_EQ(strip(t.expr), target);
  EXPECT_EQ(t.repairs, 0u);
}

TEST(SoaToSore, RejectsRepeatedLabels) {
  EXPECT_THROW(soa_to_sore(glushkov_automaton(parse("a a"))), PreconditionError);
}

TEST(KoaToKore, GlushkovInputs) {
  for (const char* text : {"b c? a (b a)* ", "a a? b+", "a", "(a b | c)+ d?", "EPS", "a?"}) {
    Regex r = parse(text);
    Regex back = koa_to_kore(glushkov_automaton(r));
    EXPECT_TRUE(equivalent(back, r)) << text << " -> " << render(back);
    EXPECT_TRUE(is_deterministic(back)) << text << " -> " << render(back);
  }
  EXPECT_EQ(koa_to_kore(glushkov_automaton(parse("a"))), parse("a"));
}

// The 2-OA with states b, c, a, b for b c? a (b a)* which is not the Glushkov
// automaton of any 1-ORE over its marking.
TEST(KoaToKore, NonGlushkovInputIsSuperApproximated) {
  Koa g;
  StateId b1 = g.add_state(Symbol("b"));
  StateId c1 = g.add_state(Symbol("c"));
  StateId a1 = g.add_state(Symbol("a"));
  StateId b2 = g.add_state(Symbol("b"));
  g.add_edge(Koa::kSrc, b1);
  g.add_edge(b1, c1);
  g.add_edge(b1, a1);
  g.add_edge(c1, a1);
  g.add_edge(a1, Koa::kSink);
  g.add_edge(a1, b2);
  g.add_edge(b2, a1);
  auto t = soa_to_sore(marking(g));
  EXPECT_GT(t.repairs, 0u);
  Regex r = strip(t.expr);
  EXPECT_EQ(render(r), "b c? (a b?)+");
  Regex target = parse("b c? a (b a)*");
  EXPECT_TRUE(included(target, r));
  EXPECT_FALSE(equivalent(target, r));
  for (const auto& w : all_words(letters(3), 7))
    if (nfa_accepts(g, w)) EXPECT_TRUE(accepts(r, w));
}

TEST(KoaToKore, EpsilonOnly) {
  Koa g;
  g.add_edge(Koa::kSrc, Koa::kSink);
  EXPECT_EQ(koa_to_kore(g), Regex::epsilon());
}

class RewriteProperties : public ::testing::TestWithParam<int> {};

TEST_P(RewriteProperties, SoundOnRandomAutomata) {
  std::mt19937_64 rng(6000 + GetParam());
  auto words = all_words(letters(3), 6);
  for (int i = 0; i < 15; ++i) {
    Koa g = random_koa(rng, letters(3), 3, 8, 0.3);
    auto t = soa_to_sore(marking(g));
    std::set<Symbol> seen;
    std::function<void(const Regex&)> walk = [&](const Regex& r) {
      if (r.is(RegexKind::kAtom)) EXPECT_TRUE(seen.insert(r.symbol()).second);
      for (const auto& c : r.children()) walk(c);
    };
    walk(t.expr);
    Regex r = strip(t.expr);
    Koa back = glushkov_automaton(r);
    for (const auto& w : words)
      if (nfa_accepts(g, w)) ASSERT_TRUE(nfa_accepts(back, w)) << render(r);
  }
}

TEST_P(RewriteProperties, ExactOnDeterministicExpressions) {
  std::mt19937_64 rng(7000 + GetParam());
  int checked = 0;
  while (checked < 15) {
    Regex r = simplify(random_regex(rng, letters(4), 2 + static_cast<int>(rng() % 7)));
    if (!is_deterministic(r)) continue;
    ++checked;
    Regex back = koa_to_kore(glushkov_automaton(r));
    EXPECT_TRUE(equivalent(back, r)) << render(r) << " -> " << render(back);
    EXPECT_TRUE(is_deterministic(back)) << render(r) << " -> " << render(back);
    EXPECT_EQ(soa_to_sore(marking(glushkov_automaton(r))).repairs, 0u) << render(r);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RewriteProperties, ::testing::Range(0, 8));

}  // namespace
}  // namespace rexinfer
