#include "rexinfer/koa.h"

#include <gtest/gtest.h>

#include "oracles.h"
#include "rexinfer/error.h"
#include "rexinfer/glushkov.h"

namespace rexinfer {
namespace {

using testing::all_words;
using testing::letters;
using testing::random_koa;
using testing::word;

using Edges = std::vector<std::pair<StateId, StateId>>;

TEST(CompleteKoa, TwoSymbolsTwoCopies) {
  Koa g = complete_koa({"a", "b"}, 2);
  EXPECT_EQ(g.num_states(), 6u);
  EXPECT_EQ(g.max_label_multiplicity(), 2u);
  EXPECT_TRUE(g.has_edge(Koa::kSrc, Koa::kSink));
  EXPECT_EQ(g.successors(Koa::kSrc).size(), 3u);
  for (StateId s = 2; s < 6; ++s) EXPECT_EQ(g.successors(s).size(), 5u);
  EXPECT_NO_THROW(g.validate(2));
}

TEST(CompleteKoa, SingleSymbol) {
  Koa g = complete_koa({"a"}, 1);
  EXPECT_EQ(g.edges(), (Edges{{0, 1}, {0, 2}, {2, 1}, {2, 2}}));
  EXPECT_TRUE(nfa_accepts(g, {}));
  EXPECT_THROW(complete_koa({}, 1), PreconditionError);
  EXPECT_THROW(complete_koa({"a"}, 0), PreconditionError);
}

TEST(CompleteKoa, AcceptsEverything) {
  for (std::size_t n : {1u, 2u}) {
    for (std::size_t k : {1u, 2u, 3u}) {
      auto sigma = letters(n);
      Koa g = complete_koa({sigma.begin(), sigma.end()}, k);
      for (const auto& w : all_words(sigma, 6)) EXPECT_TRUE(nfa_accepts(g, w));
    }
  }
}

TEST(Runs, GlushkovExample) {
  Koa g = glushkov_automaton(parse("a a? b+"));
  EXPECT_TRUE(nfa_accepts(g, word("aab")));
  EXPECT_FALSE(nfa_accepts(g, word("ba")));
  EXPECT_EQ(det_run(g, word("aab")), (std::vector<StateId>{0, 2, 3, 4, 1}));
  EXPECT_FALSE(det_run(g, word("ba")).has_value());
  EXPECT_THROW(det_run(complete_koa({"a"}, 2), word("a")), PreconditionError);
}

TEST(Prune, SingleSymbol) {
  Koa g = prune(complete_koa({"a"}, 1), Sample{word("a")});
  EXPECT_EQ(g.edges(), (Edges{{0, 2}, {2, 1}}));
}

TEST(Prune, KeepsEpsilonEdge) {
  Koa g = prune(complete_koa({"a"}, 1), Sample{{}, word("aa")});
  EXPECT_EQ(g.edges(), (Edges{{0, 1}, {0, 2}, {2, 1}, {2, 2}}));
}

TEST(Prune, RemovesUnwitnessedStates) {
  Koa g = glushkov_automaton(parse("a a? b+"));
  Koa p = prune(g, Sample{word("ab")});
  EXPECT_EQ(p.num_states(), 4u);
  EXPECT_EQ(p.edges(), (Edges{{0, 2}, {2, 3}, {3, 1}}));
  EXPECT_THROW(prune(g, Sample{word("ba")}), PreconditionError);
  EXPECT_THROW(prune(complete_koa({"a"}, 2), Sample{word("a")}), PreconditionError);
}

TEST(Validate, DetectsDeadStates) {
  Koa g;
  StateId a = g.add_state(Symbol("a"));
  g.add_edge(Koa::kSrc, a);
  EXPECT_THROW(g.validate(), InvariantError);
  g.add_edge(a, Koa::kSink);
  EXPECT_NO_THROW(g.validate(1));
  g.add_state(Symbol("a"));
  EXPECT_THROW(g.validate(), InvariantError);
  EXPECT_THROW(g.add_edge(a, Koa::kSrc), PreconditionError);
  EXPECT_THROW(g.add_edge(Koa::kSink, a), PreconditionError);
  EXPECT_NO_THROW(g.trimmed().validate(1));
}

TEST(SampleBag, Multiplicities) {
  Sample s{word("ab"), word("ab"), {}};
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.distinct_size(), 2u);
  EXPECT_EQ(s.count(word("ab")), 2u);
  EXPECT_EQ(s.count(word("b")), 0u);
  EXPECT_EQ(s.alphabet(), (std::set<std::string>{"a", "b"}));
}

class KoaProperties : public ::testing::TestWithParam<int> {};

TEST_P(KoaProperties, PruneKeepsWitnessedEdges) {
  std::mt19937_64 rng(5000 + GetParam());
  for (int i = 0; i < 20; ++i) {
    Koa g = random_koa(rng, letters(3), 2, 6, 0.4);
    if (!g.is_deterministic()) continue;
    Sample s;
    for (const auto& w : all_words(letters(3), 4))
      if (nfa_accepts(g, w) && rng() % 2) s.add(w);
    if (s.empty()) continue;
    Koa p = prune(g, s);
    EXPECT_NO_THROW(p.validate());
    for (const auto& [w, n] : s.words()) EXPECT_TRUE(nfa_accepts(p, w));
    // Every surviving edge is on the run of some word.
    std::set<std::pair<StateId, StateId>> used;
    for (const auto& [w, n] : s.words()) {
      auto run = det_run(p, w);
      ASSERT_TRUE(run.has_value());
      for (std::size_t j = 0; j + 1 < run->size(); ++j) used.emplace((*run)[j], (*run)[j + 1]);
    }
    EXPECT_EQ(used.size(), p.num_edges());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, KoaProperties, ::testing::Range(0, 4));

}  // namespace
}  // namespace rexinfer
