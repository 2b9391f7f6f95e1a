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

#include "cfrmat/builtin_games.h"
#include "cfrmat/game.h"
#include "test_oracles.h"

namespace cfrmat {
namespace {

bool HasViolation(const ValidationReport& report, Violation::Kind kind) {
  for (const auto& v : report.violations)
    if (v.kind == kind) return true;
  return false;
}

// Root decision for player 1 with two terminal children.
GameTree TwoLeafGame() {
  GameBuilder b("two_leaf", 1);
  const int root = b.AddNode(-1, NodeKind::kDecision, "");
  b.SetInfoset(root, 1, "root");
  const int left = b.AddNode(root, NodeKind::kTerminal, "L");
  b.SetPayoffs(left, {1.0});
  const int right = b.AddNode(root, NodeKind::kTerminal, "R");
  b.SetPayoffs(right, {0.0});
  return b.Build();
}

TEST_CASE("builder numbers nodes breadth first and orders actions") {
  GameBuilder b("g", 1);
  // Add deliberately out of order: children before grandchildren of the
  // first child, second action before the first.
  const int root = b.AddNode(-1, NodeKind::kChance, "");
  const int y = b.AddNode(root, NodeKind::kDecision, "y");
  const int x = b.AddNode(root, NodeKind::kDecision, "x");
  b.SetChanceProbability(y, 0.25);
  b.SetChanceProbability(x, 0.75);
  b.SetInfoset(y, 1, "h");
  b.SetInfoset(x, 1, "h");
  for (int parent : {y, x})
    for (const char* a : {"a", "b"}) b.SetPayoffs(b.AddNode(parent, NodeKind::kTerminal, a), {1.0});
  const GameTree tree = b.Build();
  REQUIRE(tree.num_nodes() == 7);
  CHECK(tree.node(0).parent == kNoNode);
  CHECK(tree.node(1).parent == 0);
  CHECK(tree.node(2).parent == 0);
  // First appearance among the root's children was "y".
  CHECK(tree.node(1).incoming_action == 0);
  CHECK(tree.node(1).chance_prob == 0.25);
  for (NodeId v = 1; v < tree.num_nodes(); ++v) CHECK(tree.node(v).parent < v);
  CHECK(MaxDepth(tree) == 2);
  CHECK(Validate(tree).ok());
}

TEST_CASE("validate accepts the whole corpus") {
  for (const auto& g : testing::Corpus()) {
    INFO(g.name);
    const ValidationReport report = Validate(g.tree);
    CHECK(report.ok());
    CHECK(report.warnings.empty());
  }
}

TEST_CASE("validate reports chance probabilities that do not sum to one") {
  GameTree tree = SignalGame();
  tree.nodes[1].chance_prob = 0.6;
  CHECK(HasViolation(Validate(tree), Violation::Kind::kChanceProbability));
}

TEST_CASE("validate reports wrong payoff count and non-finite payoffs") {
  GameTree tree = TwoLeafGame();
  tree.nodes[1].payoffs = {1.0, 2.0};
  CHECK(HasViolation(Validate(tree), Violation::Kind::kPayoffs));
  tree = TwoLeafGame();
  tree.nodes[2].payoffs = {std::numeric_limits<double>::quiet_NaN()};
  CHECK(HasViolation(Validate(tree), Violation::Kind::kPayoffs));
}

TEST_CASE("validate reports broken parent links and kinds") {
  GameTree tree = TwoLeafGame();
  tree.nodes[1].parent = 2;
  CHECK_FALSE(Validate(tree).ok());
  tree = TwoLeafGame();
  tree.nodes[0].kind = NodeKind::kTerminal;
  CHECK_FALSE(Validate(tree).ok());
  tree = TwoLeafGame();
  tree.nodes[2].incoming_action = 0;
  CHECK_FALSE(Validate(tree).ok());
}

TEST_CASE("builder rejects a missing root and unknown parents") {
  GameBuilder none("g", 1);
  CHECK_THROWS_AS(none.Build(), GameError);
  GameBuilder orphan("g", 1);
  orphan.AddNode(-1, NodeKind::kTerminal, "");
  orphan.AddNode(7, NodeKind::kTerminal, "a");
  CHECK_THROWS_AS(orphan.Build(), GameError);
}

TEST_CASE("imperfect recall is a warning, not an error") {
  // Player 1 acts, then acts again in one infoset reached by both of its
  // own earlier actions: it forgot what it did.
  GameBuilder b("forgetful", 1);
  const int root = b.AddNode(-1, NodeKind::kDecision, "");
  b.SetInfoset(root, 1, "first");
  for (const char* a : {"l", "r"}) {
    const int mid = b.AddNode(root, NodeKind::kDecision, a);
    b.SetInfoset(mid, 1, "second");
    b.SetPayoffs(b.AddNode(mid, NodeKind::kTerminal, "x"), {0.0});
    b.SetPayoffs(b.AddNode(mid, NodeKind::kTerminal, "y"), {1.0});
  }
  const GameTree tree = b.BuildUnchecked();
  const ValidationReport report = Validate(tree);
  CHECK(report.ok());
  REQUIRE_FALSE(report.warnings.empty());
  CHECK(report.warnings[0].kind == Violation::Kind::kPerfectRecall);
}

TEST_CASE("game text round trip is the identity on the corpus") {
  for (const auto& g : testing::Corpus()) {
    INFO(g.name);
    const std::string text = SerializeGameText(g.tree);
    const GameTree back = ParseGameText(text);
    CHECK(back == g.tree);
    CHECK(SerializeGameText(back) == text);
  }
}

TEST_CASE("game text parses comments and reports positions") {
  const std::string good =
      "# tiny game\n"
      "game tiny players=1\n"
      "node 0 parent=none kind=P player=1 infoset=h   # root\n"
      "node 1 parent=0 kind=T action=a payoffs=1\n"
      "node 2 parent=0 kind=T action=b payoffs=0\n";
  const GameTree tree = ParseGameText(good);
  CHECK(tree.num_nodes() == 3);
  CHECK(tree.name == "tiny");

  const std::string undefined_parent =
      "game tiny players=1\n"
      "node 0 parent=none kind=P player=1 infoset=h\n"
      "node 1 parent=5 kind=T action=a payoffs=1\n";
  try {
    ParseGameText(undefined_parent);
    FAIL("expected a parse error");
  } catch (const GameTextError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 1);
    CHECK(std::string(e.what()).find("parent id 5 is not defined") != std::string::npos);
  }

  CHECK_THROWS_AS(ParseGameText("game g players=1\nnode 0 parent=none kind=Q\n"), GameTextError);
  CHECK_THROWS_AS(ParseGameText("game g players=2\nnode 0 parent=none kind=T payoffs=1\n"),
                  GameTextError);
  CHECK_THROWS_AS(ParseGameText("node 0 parent=none kind=T payoffs=1\n"), GameTextError);
}

}  // namespace
}  // namespace cfrmat
