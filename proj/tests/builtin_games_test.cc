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

#include <set>

#include "cfrmat/builtin_games.h"
#include "cfrmat/oracle.h"
#include "test_oracles.h"

namespace cfrmat {
namespace {

struct Counts {
  Index nodes = 0, terminals = 0, rational_infosets = 0;
};

Counts Count(const GameTree& tree) {
  Counts c;
  c.nodes = tree.num_nodes();
  for (const Node& n : tree.nodes) c.terminals += n.kind == NodeKind::kTerminal;
  for (const Infoset& h : tree.infosets) c.rational_infosets += h.owner != kChancePlayer;
  return c;
}

TEST_CASE("kuhn poker sizes") {
  const Counts k2 = Count(KuhnPoker(2));
  CHECK(k2.nodes == 58);
  CHECK(k2.terminals == 30);
  CHECK(k2.rational_infosets == 12);
  const Counts k3 = Count(KuhnPoker(3));
  CHECK(k3.nodes == 617);
  CHECK(k3.terminals == 312);
  CHECK(k3.rational_infosets == 48);
  CHECK_THROWS_AS(KuhnPoker(1), std::invalid_argument);
  CHECK_THROWS_AS(KuhnPoker(5), std::invalid_argument);
}

TEST_CASE("kuhn poker is zero sum with the known uniform value") {
  for (int p = 2; p <= 4; ++p) {
    const GameTree tree = KuhnPoker(p);
    for (const Node& n : tree.nodes) {
      if (n.kind != NodeKind::kTerminal) continue;
      double sum = 0.0;
      for (double u : n.payoffs) sum += u;
      CHECK(sum == doctest::Approx(0.0));
    }
  }
  // Under uniform play in 2-player Kuhn poker the first player's value is
  // 1/8 by direct enumeration of the 6 deals and 5 betting lines.
  const GameTree k2 = KuhnPoker(2);
  const auto value = ExpectedPayoff(k2, UniformStrategy(k2));
  CHECK(value[0] == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("signal game payoffs") {
  const GameTree tree = SignalGame();
  CHECK(tree.num_nodes() == 15);
  CHECK(tree.num_players == 2);
  // Truthful signaling and matching response: player 2 always right,
  // player 1 pays no lying cost and gets the bonus when r = 1 (s = 1).
  FullStrategy fs = UniformStrategy(tree);
  for (InfosetId h = 0; h < static_cast<InfosetId>(tree.infosets.size()); ++h) {
    const Infoset& info = tree.infoset(h);
    if (info.owner == kChancePlayer) continue;
    const bool first = info.label.back() == '0';
    fs.probs[static_cast<size_t>(h)] = first ? std::vector<double>{1.0, 0.0} : std::vector<double>{0.0, 1.0};
  }
  const auto value = ExpectedPayoff(tree, fs);
  CHECK(value[0] == doctest::Approx(1.0));
  CHECK(value[1] == doctest::Approx(1.0));
}

TEST_CASE("random games are deterministic, valid and have perfect recall") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomGameSpec spec = testing::CorpusRandomSpec(seed);
    spec.num_players = 1 + static_cast<int>(seed % 4);
    const GameTree a = RandomGame(spec);
    const GameTree b = RandomGame(spec);
    CHECK(a == b);
    const ValidationReport report = Validate(a);
    CHECK(report.ok());
    CHECK(report.warnings.empty());
    CHECK(MaxDepth(a) <= spec.max_depth);
    for (const Node& n : a.nodes)
      if (n.kind == NodeKind::kTerminal)
        for (double u : n.payoffs) {
          CHECK(u >= spec.payoff_min);
          CHECK(u <= spec.payoff_max);
        }
  }
  RandomGameSpec one;
  one.seed = 1;
  RandomGameSpec two;
  two.seed = 2;
  CHECK_FALSE(RandomGame(one) == RandomGame(two));
}

TEST_CASE("random game spec ranges are enforced") {
  RandomGameSpec spec;
  spec.max_depth = 0;
  CHECK_THROWS_AS(RandomGame(spec), std::invalid_argument);
  spec = RandomGameSpec{};
  spec.max_branching = 1;
  CHECK_THROWS_AS(RandomGame(spec), std::invalid_argument);
  spec = RandomGameSpec{};
  spec.num_players = 5;
  CHECK_THROWS_AS(RandomGame(spec), std::invalid_argument);
  spec = RandomGameSpec{};
  spec.payoff_min = 2.0;
  CHECK_THROWS_AS(RandomGame(spec), std::invalid_argument);
}

TEST_CASE("splitmix64 reference values") {
  // First outputs for seed 0, shared by every implementation of SplitMix64.
  SplitMix64 rng(0);
  CHECK(rng.Next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.Next() == 0x6E789E6AA1B965F4ULL);
  SplitMix64 u(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.NextDouble();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    const int k = u.NextInt(2, 5);
    CHECK(k >= 2);
    CHECK(k <= 5);
  }
}

TEST_CASE("builtin names") {
  for (const char* name : {"kuhn2", "kuhn3", "kuhn4", "signal", "random:7"}) {
    CHECK(IsBuiltinGameName(name));
    CHECK(Validate(BuiltinGame(name)).ok());
  }
  CHECK_FALSE(IsBuiltinGameName("leduc"));
  CHECK_THROWS_AS(BuiltinGame("leduc"), std::invalid_argument);
  CHECK_THROWS_AS(BuiltinGame("random:abc"), std::invalid_argument);
}

}  // namespace
}  // namespace cfrmat
