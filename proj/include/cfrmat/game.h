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

#ifndef CFRMAT_GAME_H_
#define CFRMAT_GAME_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cfrmat {

using NodeId = std::int64_t;
using InfosetId = std::int64_t;
using ActionId = std::int64_t;
using PlayerId = int;

inline constexpr NodeId kNoNode = -1;
inline constexpr InfosetId kNoInfoset = -1;
inline constexpr ActionId kNoAction = -1;
inline constexpr PlayerId kChancePlayer = 0;

enum class NodeKind : std::uint8_t { kChance, kDecision, kTerminal };

char NodeKindCode(NodeKind kind);

struct Node {
  NodeKind kind = NodeKind::kTerminal;
  NodeId parent = kNoNode;
  int depth = 0;
  // Set for chance and player decision nodes only.
  InfosetId infoset = kNoInfoset;
  // Index into the parent's infoset action list. Unset for the root.
  ActionId incoming_action = kNoAction;
  // Probability of reaching this node from a chance parent, else 0.
  double chance_prob = 0.0;
  // One value per rational player on terminals, empty elsewhere.
  std::vector<double> payoffs;
  // Children ordered by incoming action.
  std::vector<NodeId> children;

  bool operator==(const Node&) const = default;
};

struct Infoset {
  PlayerId owner = kChancePlayer;
  // Player-scoped label. Empty for anonymous per-node chance infosets.
  std::string label;
  std::vector<std::string> actions;

  bool operator==(const Infoset&) const = default;
};

// Explicit finite extensive-form game. Nodes are indexed breadth-first
// (grouped by depth, then by parent index, then by action order) and
// infosets are grouped by owner. Build instances with GameBuilder.
struct GameTree {
  std::string name;
  int num_players = 1;
  std::vector<Node> nodes;
  std::vector<Infoset> infosets;

  NodeId num_nodes() const { return static_cast<NodeId>(nodes.size()); }
  const Node& node(NodeId id) const { return nodes[static_cast<size_t>(id)]; }
  const Infoset& infoset(InfosetId id) const {
    return infosets[static_cast<size_t>(id)];
  }
  PlayerId owner(NodeId decision_node) const {
    return infoset(node(decision_node).infoset).owner;
  }
  bool IsTerminal(NodeId id) const {
    return node(id).kind == NodeKind::kTerminal;
  }

  bool operator==(const GameTree&) const = default;
};

// Raised for structurally unusable input (no root, cycles, unknown parents)
// and for trees rejected by Validate().
class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  enum class Kind {
    kRoot,
    kParentOrder,
    kDepth,
    kNodeKind,
    kInfoset,
    kActionBijection,
    kChanceProbability,
    kPayoffs,
    kPerfectRecall,
  };
  Kind kind;
  // Offending node, or kNoNode when the violation concerns an infoset.
  NodeId node = kNoNode;
  InfosetId infoset = kNoInfoset;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  // Non-fatal findings. Imperfect recall lands here.
  std::vector<Violation> warnings;

  bool ok() const { return violations.empty(); }
  std::string Summary() const;
};

inline constexpr double kChanceSumTolerance = 1e-12;

ValidationReport Validate(const GameTree& tree);

// Maximum node depth; also the number of level graphs the compiler emits.
int MaxDepth(const GameTree& tree);

// Accumulates nodes with arbitrary caller-side handles and produces a
// breadth-first indexed GameTree. Infoset action order is the order in which
// action labels first appear among the children of the infoset's members.
class GameBuilder {
 public:
  GameBuilder(std::string name, int num_players);

  // Returns a handle usable as `parent` in later calls. Nodes may be added in
  // any order relative to their parents as long as every parent handle exists
  // by the time Build() runs.
  int AddNode(int parent, NodeKind kind, std::string incoming_action);

  void SetInfoset(int handle, PlayerId player, std::string label);
  void SetChanceProbability(int handle, double prob);
  void SetPayoffs(int handle, std::vector<double> payoffs);

  int size() const { return static_cast<int>(pending_.size()); }

  // Orders, indexes and validates. Throws GameError on failure.
  GameTree Build() const;
  // Same, but leaves invariant checking to the caller. Still throws when the
  // parent links do not form a single rooted tree.
  GameTree BuildUnchecked() const;

 private:
  struct PendingNode {
    int parent;
    NodeKind kind;
    std::string action;
    PlayerId player = kChancePlayer;
    std::string infoset_label;
    bool has_infoset = false;
    double chance_prob = 0.0;
    std::vector<double> payoffs;
  };

  std::string name_;
  int num_players_;
  std::vector<PendingNode> pending_;
};

// Text format, one record per line, `#` starts a comment:
//   game <name> players=<P>
//   node <id> parent=<id|none> kind=<C|P|T> [player=<p>] [infoset=<label>]
//        [action=<label>] [prob=<decimal>] [payoffs=<v1,...,vP>]
class GameTextError : public GameError {
 public:
  GameTextError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

GameTree ParseGameText(std::string_view text);
std::string SerializeGameText(const GameTree& tree);

}  // namespace cfrmat

#endif  // CFRMAT_GAME_H_
