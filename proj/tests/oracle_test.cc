// Copyright 2026 The cfrmat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfrmat/builtin_games.h"
#include "cfrmat/compiler.h"
#include "cfrmat/oracle.h"
#include "test_oracles.h"

namespace cfrmat {
namespace {

GameTree OneDecision(const std::vector<double>& payoffs) {
  GameBuilder b("one_decision", 1);
  const int root = b.AddNode(-1, NodeKind::kDecision, "");
  b.SetInfoset(root, 1, "root");
  for (size_t a = 0; a < payoffs.size(); ++a)
    b.SetPayoffs(b.AddNode(root, NodeKind::kTerminal, "a" + std::to_string(a)), {payoffs[a]});
  return b.Build();
}

// Simultaneous 2x2 game: player 2 does not observe player 1's move.
GameTree Matrix2x2(const std::vector<std::vector<double>>& u1, const std::vector<std::vector<double>>& u2) {
  GameBuilder b("matrix", 2);
  const int root = b.AddNode(-1, NodeKind::kDecision, "");
  b.SetInfoset(root, 1, "p1");
  for (int r = 0; r < 2; ++r) {
    const int mid = b.AddNode(root, NodeKind::kDecision, "r" + std::to_string(r));
    b.SetInfoset(mid, 2, "p2");
    for (int c = 0; c < 2; ++c)
      b.SetPayoffs(b.AddNode(mid, NodeKind::kTerminal, "c" + std::to_string(c)),
                   {u1[static_cast<size_t>(r)][static_cast<size_t>(c)],
                    u2[static_cast<size_t>(r)][static_cast<size_t>(c)]});
  }
  return b.Build();
}

FullStrategy RandomStrategy(const GameTree& tree, SplitMix64& rng) {
  FullStrategy fs = UniformStrategy(tree);
  for (size_t h = 0; h < fs.probs.size(); ++h) {
    if (tree.infosets[h].owner == kChancePlayer) continue;
    double total = 0.0;
    for (double& p : fs.probs[h]) total += p = rng.NextDouble() < 0.2 ? 0.0 : rng.NextDouble();
    if (total == 0.0) {
      fs.probs[h][0] = total = 1.0;
    }
    for (double& p : fs.probs[h]) p /= total;
  }
  return fs;
}

TEST_CASE("recursive cfr on a single decision") {
  const GameTree tree = OneDecision({1.0, 0.0});
  RecursiveCfr cfr(tree);
  cfr.Iterate();
  CHECK(cfr.instantaneous_regret()[0] == std::vector<double>{0.5, -0.5});
  CHECK(cfr.sigma().probs[0] == std::vector<double>{1.0, 0.0});
  cfr.Iterate();
  CHECK(cfr.sigma().probs[0] == std::vector<double>{1.0, 0.0});
  // Average: (0.5 + 1) / 2 on the first action.
  CHECK(cfr.AverageSigma().probs[0][0] == doctest::Approx(0.75));

  RecursiveCfr flat(OneDecision({0.0, 0.0}));
  flat.Iterate();
  CHECK(flat.sigma().probs[0] == std::vector<double>{0.5, 0.5});
}

TEST_CASE("trajectory records one snapshot per iteration") {
  const auto trajectory = RecursiveCfrTrajectory(KuhnPoker(2), 5);
  CHECK(trajectory.size() == 5);
  CHECK_THROWS_AS(RecursiveCfrTrajectory(KuhnPoker(2), 0), std::invalid_argument);
}

TEST_CASE("expected payoff") {
  GameBuilder b("coin", 1);
  const int root = b.AddNode(-1, NodeKind::kChance, "");
  const int heads = b.AddNode(root, NodeKind::kTerminal, "h");
  const int tails = b.AddNode(root, NodeKind::kTerminal, "t");
  b.SetChanceProbability(heads, 0.5);
  b.SetChanceProbability(tails, 0.5);
  b.SetPayoffs(heads, {1.0});
  b.SetPayoffs(tails, {-1.0});
  const GameTree coin = b.Build();
  CHECK(ExpectedPayoff(coin, UniformStrategy(coin)) == std::vector<double>{0.0});

  const GameTree path = OneDecision({3.0, 7.0});
  FullStrategy pure = UniformStrategy(path);
  pure.probs[0] = {0.0, 1.0};
  CHECK(ExpectedPayoff(path, pure) == std::vector<double>{7.0});

  for (int p = 2; p <= 3; ++p) {
    const GameTree kuhn = KuhnPoker(p);
    double sum = 0.0;
    for (double x : ExpectedPayoff(kuhn, UniformStrategy(kuhn))) sum += x;
    CHECK(std::abs(sum) <= 1e-12);
  }
}

TEST_CASE("best response against a fixed pure opponent") {
  const GameTree tree = Matrix2x2({{3.0, 0.0}, {1.0, 2.0}}, {{0.0, 0.0}, {0.0, 0.0}});
  FullStrategy fs = UniformStrategy(tree);
  for (size_t h = 0; h < fs.probs.size(); ++h)
    if (tree.infosets[h].owner == 2) fs.probs[h] = {0.0, 1.0};
  CHECK(BestResponseValue(tree, fs, 1) == 2.0);
  for (size_t h = 0; h < fs.probs.size(); ++h)
    if (tree.infosets[h].owner == 2) fs.probs[h] = {1.0, 0.0};
  CHECK(BestResponseValue(tree, fs, 1) == 3.0);
}

TEST_CASE("best response equals pure-strategy enumeration") {
  const GameTree k2 = KuhnPoker(2);
  const FullStrategy uniform = UniformStrategy(k2);
  for (PlayerId p = 1; p <= 2; ++p)
    CHECK(std::abs(BestResponseValue(k2, uniform, p) - testing::EnumeratedBestResponse(k2, uniform, p)) <= 1e-12);

  SplitMix64 rng(5);
  std::vector<testing::NamedGame> games = testing::Corpus(8);
  for (const auto& g : games) {
    if (g.name == "kuhn3" || g.name == "kuhn4") continue;
    INFO(g.name);
    for (int trial = 0; trial < 3; ++trial) {
      const FullStrategy fs = RandomStrategy(g.tree, rng);
      const auto expected = ExpectedPayoff(g.tree, fs);
      for (PlayerId p = 1; p <= g.tree.num_players; ++p) {
        double enumerated = 0.0;
        try {
          enumerated = testing::EnumeratedBestResponse(g.tree, fs, p);
        } catch (const std::length_error&) {
          continue;
        }
        const double br = BestResponseValue(g.tree, fs, p);
        CHECK(std::abs(br - enumerated) <= 1e-12);
        CHECK(br >= expected[static_cast<size_t>(p - 1)] - 1e-12);
      }
    }
  }
}

TEST_CASE("nash conv") {
  // Pure equilibrium of a coordination game.
  const GameTree coord = Matrix2x2({{2.0, 0.0}, {0.0, 1.0}}, {{2.0, 0.0}, {0.0, 1.0}});
  FullStrategy eq = UniformStrategy(coord);
  for (auto& probs : eq.probs) probs = {1.0, 0.0};
  CHECK(NashConv(coord, eq) == 0.0);
  CHECK(Exploitability(coord, eq) == 0.0);

  const GameTree k2 = KuhnPoker(2);
  const FullStrategy uniform = UniformStrategy(k2);
  const auto value = ExpectedPayoff(k2, uniform);
  const double enumerated = testing::EnumeratedBestResponse(k2, uniform, 1) - value[0] +
                            testing::EnumeratedBestResponse(k2, uniform, 2) - value[1];
  CHECK(NashConv(k2, uniform) > 0.0);
  CHECK(std::abs(NashConv(k2, uniform) - enumerated) <= 1e-12);
  CHECK(Exploitability(k2, uniform) == doctest::Approx(NashConv(k2, uniform) / 2.0));

  SplitMix64 rng(3);
  for (const auto& g : testing::Corpus(10))
    for (int trial = 0; trial < 3; ++trial) CHECK(NashConv(g.tree, RandomStrategy(g.tree, rng)) >= -1e-10);
}

TEST_CASE("recursive cfr exploitability decreases across checkpoints") {
  const GameTree k2 = KuhnPoker(2);
  RecursiveCfr cfr(k2);
  double previous = std::numeric_limits<double>::infinity();
  int t = 0;
  for (int checkpoint : {10, 100, 1000, 10000}) {
    while (t < checkpoint) {
      cfr.Iterate();
      ++t;
    }
    const double e = Exploitability(k2, cfr.AverageSigma());
    CHECK(e <= previous);
    previous = e;
  }
  CHECK(previous <= 5e-3);
}

TEST_CASE("pair conversion through source and decompiled trees") {
  for (const auto& g : testing::Corpus(4)) {
    INFO(g.name);
    const CompiledGame cg = Compile(g.tree);
    SplitMix64 rng(1);
    const FullStrategy fs = RandomStrategy(g.tree, rng);
    const std::vector<double> pairs = PairsFromStrategy(g.tree, cg.maps, fs);
    CHECK(StrategyFromPairs(g.tree, cg.maps, pairs) == fs);
    const GameTree back = Decompile(cg);
    const FullStrategy on_back = StrategyFromPairs(back, cg.maps, pairs);
    CHECK(PairsFromStrategy(back, cg.maps, on_back) == pairs);
    CHECK(std::abs(NashConv(back, on_back) - NashConv(g.tree, fs)) <= 1e-12);
  }
}

}  // namespace
}  // namespace cfrmat
