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

#include "cfrmat/game.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

namespace cfrmat {
namespace {

using OwnHistory = std::vector<std::pair<InfosetId, ActionId>>;

void AddViolation(std::vector<Violation>& out, Violation::Kind kind,
                  NodeId node, InfosetId infoset, std::string message) {
  out.push_back(Violation{kind, node, infoset, std::move(message)});
}

std::string NodeRef(NodeId v) { return "node " + std::to_string(v); }
std::string InfosetRef(InfosetId h) { return "infoset " + std::to_string(h); }

// Sequence of (infoset, action) pairs taken by `player` on the path to `v`.
OwnHistory OwnActionHistory(const GameTree& tree, NodeId v, PlayerId player) {
  OwnHistory history;
  while (tree.node(v).parent != kNoNode) {
    const NodeId parent = tree.node(v).parent;
    const Node& p = tree.node(parent);
    if (p.kind == NodeKind::kDecision && tree.infoset(p.infoset).owner == player)
      history.emplace_back(p.infoset, tree.node(v).incoming_action);
    v = parent;
  }
  std::reverse(history.begin(), history.end());
  return history;
}

}  // namespace

char NodeKindCode(NodeKind kind) {
  switch (kind) {
    case NodeKind::kChance:
      return 'C';
    case NodeKind::kDecision:
      return 'P';
    case NodeKind::kTerminal:
      return 'T';
  }
  return '?';
}

std::string ValidationReport::Summary() const {
  std::ostringstream out;
  for (const Violation& v : violations) out << v.message << "\n";
  for (const Violation& w : warnings) out << "warning: " << w.message << "\n";
  return out.str();
}

ValidationReport Validate(const GameTree& tree) {
  using Kind = Violation::Kind;
  ValidationReport report;
  auto& errs = report.violations;
  const NodeId n = tree.num_nodes();
  const auto num_infosets = static_cast<InfosetId>(tree.infosets.size());

  if (tree.num_players < 1)
    AddViolation(errs, Kind::kRoot, kNoNode, kNoInfoset,
                 "game must have at least one rational player");
  if (n == 0) {
    AddViolation(errs, Kind::kRoot, kNoNode, kNoInfoset, "game has no nodes");
    return report;
  }
  if (tree.node(0).parent != kNoNode || tree.node(0).depth != 0)
    AddViolation(errs, Kind::kRoot, 0, kNoInfoset,
                 "node 0 must be the root (no parent, depth 0)");

  // Parent links, depth and breadth-first order.
  bool links_ok = true;
  for (NodeId v = 1; v < n; ++v) {
    const Node& node = tree.node(v);
    if (node.parent == kNoNode) {
      AddViolation(errs, Kind::kRoot, v, kNoInfoset,
                   NodeRef(v) + " is a second root");
      links_ok = false;
      continue;
    }
    if (node.parent < 0 || node.parent >= v) {
      AddViolation(errs, Kind::kParentOrder, v, kNoInfoset,
                   NodeRef(v) + " has parent " + std::to_string(node.parent) +
                       " which does not precede it");
      links_ok = false;
      continue;
    }
    const Node& parent = tree.node(node.parent);
    if (node.depth != parent.depth + 1)
      AddViolation(errs, Kind::kDepth, v, kNoInfoset,
                   NodeRef(v) + " depth " + std::to_string(node.depth) +
                       " is not parent depth + 1");
    if (parent.kind == NodeKind::kTerminal)
      AddViolation(errs, Kind::kNodeKind, v, kNoInfoset,
                   NodeRef(v) + " has terminal parent " +
                       std::to_string(node.parent));
    if (v > 1) {
      const Node& prev = tree.node(v - 1);
      if (prev.parent != kNoNode &&
          std::tuple(node.depth, node.parent, node.incoming_action) <=
              std::tuple(prev.depth, prev.parent, prev.incoming_action))
        AddViolation(errs, Kind::kParentOrder, v, kNoInfoset,
                     NodeRef(v) + " breaks breadth-first ordering");
    }
  }

  // Children lists must mirror the parent links.
  if (links_ok) {
    std::vector<std::vector<NodeId>> children(static_cast<size_t>(n));
    for (NodeId v = 1; v < n; ++v)
      children[static_cast<size_t>(tree.node(v).parent)].push_back(v);
    for (NodeId v = 0; v < n; ++v)
      if (children[static_cast<size_t>(v)] != tree.node(v).children)
        AddViolation(errs, Kind::kParentOrder, v, kNoInfoset,
                     NodeRef(v) + " children list disagrees with parent links");
  }

  // Infoset table: grouped by owner, labels unique per owner, members exist.
  std::vector<NodeId> first_member(static_cast<size_t>(num_infosets), kNoNode);
  std::map<std::pair<PlayerId, std::string>, InfosetId> labels;
  for (InfosetId h = 0; h < num_infosets; ++h) {
    const Infoset& info = tree.infoset(h);
    if (info.owner < 0 || info.owner > tree.num_players)
      AddViolation(errs, Kind::kInfoset, kNoNode, h,
                   InfosetRef(h) + " has invalid owner " +
                       std::to_string(info.owner));
    if (h > 0 && info.owner < tree.infoset(h - 1).owner)
      AddViolation(errs, Kind::kInfoset, kNoNode, h,
                   InfosetRef(h) + " is not grouped by owner");
    if (info.actions.empty())
      AddViolation(errs, Kind::kActionBijection, kNoNode, h,
                   InfosetRef(h) + " has no actions");
    if (!info.label.empty() &&
        !labels.emplace(std::pair(info.owner, info.label), h).second)
      AddViolation(errs, Kind::kInfoset, kNoNode, h,
                   InfosetRef(h) + " duplicates label '" + info.label +
                       "' of player " + std::to_string(info.owner));
    if (info.label.empty() && info.owner != kChancePlayer)
      AddViolation(errs, Kind::kInfoset, kNoNode, h,
                   InfosetRef(h) + " of a rational player has no label");
  }

  // Per-node kind, infoset, bijection and payload checks.
  std::vector<std::vector<double>> chance_probs(static_cast<size_t>(num_infosets));
  for (NodeId v = 0; v < n; ++v) {
    const Node& node = tree.node(v);
    if (std::any_of(node.children.begin(), node.children.end(),
                    [n](NodeId c) { return c <= 0 || c >= n; })) {
      AddViolation(errs, Kind::kParentOrder, v, kNoInfoset,
                   NodeRef(v) + " lists a child outside the node range");
      continue;
    }
    const bool is_terminal = node.kind == NodeKind::kTerminal;
    if (is_terminal) {
      if (node.infoset != kNoInfoset)
        AddViolation(errs, Kind::kNodeKind, v, node.infoset,
                     NodeRef(v) + " is terminal but has an infoset");
      if (static_cast<int>(node.payoffs.size()) != tree.num_players)
        AddViolation(errs, Kind::kPayoffs, v, kNoInfoset,
                     NodeRef(v) + " has " + std::to_string(node.payoffs.size()) +
                         " payoffs, expected " +
                         std::to_string(tree.num_players));
      for (double p : node.payoffs)
        if (!std::isfinite(p))
          AddViolation(errs, Kind::kPayoffs, v, kNoInfoset,
                       NodeRef(v) + " has a non-finite payoff");
      if (!node.children.empty())
        AddViolation(errs, Kind::kNodeKind, v, kNoInfoset,
                     NodeRef(v) + " is terminal but has children");
      continue;
    }
    if (!node.payoffs.empty())
      AddViolation(errs, Kind::kPayoffs, v, kNoInfoset,
                   NodeRef(v) + " is a decision node carrying payoffs");
    if (node.infoset < 0 || node.infoset >= num_infosets) {
      AddViolation(errs, Kind::kInfoset, v, node.infoset,
                   NodeRef(v) + " references a missing infoset");
      continue;
    }
    const Infoset& info = tree.infoset(node.infoset);
    if (first_member[static_cast<size_t>(node.infoset)] == kNoNode)
      first_member[static_cast<size_t>(node.infoset)] = v;
    const bool chance = node.kind == NodeKind::kChance;
    if (chance != (info.owner == kChancePlayer))
      AddViolation(errs, Kind::kNodeKind, v, node.infoset,
                   NodeRef(v) + " kind does not match owner of " +
                       InfosetRef(node.infoset));

    // Children's incoming actions must be a bijection onto the action list.
    std::vector<ActionId> seen;
    for (NodeId c : node.children) seen.push_back(tree.node(c).incoming_action);
    std::vector<ActionId> expected(info.actions.size());
    std::iota(expected.begin(), expected.end(), ActionId{0});
    if (seen != expected)
      AddViolation(errs, Kind::kActionBijection, v, node.infoset,
                   NodeRef(v) + " children do not match the actions of " +
                       InfosetRef(node.infoset));

    if (chance) {
      double sum = 0.0;
      bool in_range = true;
      std::vector<double> probs;
      for (NodeId c : node.children) {
        const double p = tree.node(c).chance_prob;
        in_range = in_range && p >= 0.0 && p <= 1.0;
        sum += p;
        probs.push_back(p);
      }
      if (!in_range)
        AddViolation(errs, Kind::kChanceProbability, v, node.infoset,
                     NodeRef(v) + " has a chance probability outside [0,1]");
      if (std::abs(sum - 1.0) > kChanceSumTolerance)
        AddViolation(errs, Kind::kChanceProbability, v, node.infoset,
                     NodeRef(v) + " chance probabilities sum to " +
                         std::to_string(sum) + " != 1");
      auto& shared = chance_probs[static_cast<size_t>(node.infoset)];
      if (shared.empty())
        shared = probs;
      else if (shared != probs)
        AddViolation(errs, Kind::kChanceProbability, v, node.infoset,
                     NodeRef(v) + " disagrees with other members of " +
                         InfosetRef(node.infoset) + " on chance probabilities");
    } else {
      for (NodeId c : node.children)
        if (tree.node(c).chance_prob != 0.0)
          AddViolation(errs, Kind::kChanceProbability, c, kNoInfoset,
                       NodeRef(c) + " has a chance probability but a "
                                    "non-chance parent");
    }
  }
  for (InfosetId h = 0; h < num_infosets; ++h)
    if (first_member[static_cast<size_t>(h)] == kNoNode)
      AddViolation(errs, Kind::kInfoset, kNoNode, h,
                   InfosetRef(h) + " has no member nodes");

  // Perfect recall only makes sense once the links are sound.
  if (report.ok()) {
    std::vector<OwnHistory> reference(static_cast<size_t>(num_infosets));
    std::vector<bool> warned(static_cast<size_t>(num_infosets), false);
    for (NodeId v = 0; v < n; ++v) {
      const Node& node = tree.node(v);
      if (node.kind != NodeKind::kDecision) continue;
      const auto h = static_cast<size_t>(node.infoset);
      OwnHistory history = OwnActionHistory(tree, v, tree.infoset(h).owner);
      if (first_member[h] == v) {
        reference[h] = std::move(history);
      } else if (!warned[h] && history != reference[h]) {
        warned[h] = true;
        AddViolation(report.warnings, Kind::kPerfectRecall, v, node.infoset,
                     InfosetRef(node.infoset) +
                         " members have different own-action histories "
                         "(imperfect recall)");
      }
    }
  }
  return report;
}

int MaxDepth(const GameTree& tree) {
  int depth = 0;
  for (const Node& node : tree.nodes) depth = std::max(depth, node.depth);
  return depth;
}

GameBuilder::GameBuilder(std::string name, int num_players)
    : name_(std::move(name)), num_players_(num_players) {}

int GameBuilder::AddNode(int parent, NodeKind kind,
                         std::string incoming_action) {
  PendingNode node;
  node.parent = parent;
  node.kind = kind;
  node.action = std::move(incoming_action);
  pending_.push_back(std::move(node));
  return static_cast<int>(pending_.size()) - 1;
}

void GameBuilder::SetInfoset(int handle, PlayerId player, std::string label) {
  PendingNode& node = pending_.at(static_cast<size_t>(handle));
  node.player = player;
  node.infoset_label = std::move(label);
  node.has_infoset = true;
}

void GameBuilder::SetChanceProbability(int handle, double prob) {
  pending_.at(static_cast<size_t>(handle)).chance_prob = prob;
}

void GameBuilder::SetPayoffs(int handle, std::vector<double> payoffs) {
  pending_.at(static_cast<size_t>(handle)).payoffs = std::move(payoffs);
}

GameTree GameBuilder::BuildUnchecked() const {
  const int n = size();
  int root = -1;
  std::vector<std::vector<int>> children(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int parent = pending_[static_cast<size_t>(i)].parent;
    if (parent < 0) {
      if (root >= 0) throw GameError("game has more than one root");
      root = i;
    } else if (parent >= n) {
      throw GameError("node handle " + std::to_string(i) +
                      " references unknown parent " + std::to_string(parent));
    } else {
      children[static_cast<size_t>(parent)].push_back(i);
    }
  }
  if (root < 0) throw GameError("game has no root");

  // Infoset keys. Anonymous chance nodes get a private key.
  using Key = std::pair<PlayerId, std::string>;
  std::vector<Key> key_of(static_cast<size_t>(n));
  std::map<Key, int> key_index;
  std::vector<std::vector<std::string>> key_actions;
  auto key_for = [&](int handle) -> int {
    const PendingNode& p = pending_[static_cast<size_t>(handle)];
    if (p.kind == NodeKind::kTerminal) return -1;
    if (p.kind == NodeKind::kDecision && !p.has_infoset)
      throw GameError("decision node handle " + std::to_string(handle) +
                      " has no player/infoset");
    Key key = (p.kind == NodeKind::kChance && p.infoset_label.empty())
                  ? Key{kChancePlayer, "\x01" + std::to_string(handle)}
                  : Key{p.kind == NodeKind::kChance ? kChancePlayer : p.player,
                        p.infoset_label};
    auto [it, inserted] = key_index.emplace(key, key_index.size());
    if (inserted) key_actions.emplace_back();
    key_of[static_cast<size_t>(handle)] = key;
    return it->second;
  };
  std::vector<int> key_id(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) key_id[static_cast<size_t>(i)] = key_for(i);
  for (int i = 0; i < n; ++i) {
    const int parent = pending_[static_cast<size_t>(i)].parent;
    if (parent < 0) continue;
    const int k = key_id[static_cast<size_t>(parent)];
    if (k < 0) continue;
    auto& actions = key_actions[static_cast<size_t>(k)];
    const std::string& label = pending_[static_cast<size_t>(i)].action;
    if (std::find(actions.begin(), actions.end(), label) == actions.end())
      actions.push_back(label);
  }
  auto action_index = [&](int handle) -> ActionId {
    const int parent = pending_[static_cast<size_t>(handle)].parent;
    if (parent < 0) return kNoAction;
    const int k = key_id[static_cast<size_t>(parent)];
    if (k < 0) return kNoAction;
    const auto& actions = key_actions[static_cast<size_t>(k)];
    return std::find(actions.begin(), actions.end(),
                     pending_[static_cast<size_t>(handle)].action) -
           actions.begin();
  };

  // Breadth-first numbering, children by action order.
  std::vector<int> order;
  std::vector<NodeId> new_id(static_cast<size_t>(n), kNoNode);
  std::vector<int> depth(static_cast<size_t>(n), 0);
  order.reserve(static_cast<size_t>(n));
  std::deque<int> queue{root};
  new_id[static_cast<size_t>(root)] = 0;
  while (!queue.empty()) {
    const int h = queue.front();
    queue.pop_front();
    order.push_back(h);
    auto kids = children[static_cast<size_t>(h)];
    std::stable_sort(kids.begin(), kids.end(), [&](int a, int b) {
      return action_index(a) < action_index(b);
    });
    for (int c : kids) {
      if (new_id[static_cast<size_t>(c)] != kNoNode)
        throw GameError("parent links contain a cycle");
      new_id[static_cast<size_t>(c)] = static_cast<NodeId>(order.size() + queue.size());
      depth[static_cast<size_t>(c)] = depth[static_cast<size_t>(h)] + 1;
      queue.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != n)
    throw GameError("some nodes are not reachable from the root");

  // Infoset ids grouped by owner, then by first appearance.
  std::vector<int> keys_by_appearance;
  std::vector<bool> placed(key_actions.size(), false);
  for (int h : order) {
    const int k = key_id[static_cast<size_t>(h)];
    if (k >= 0 && !placed[static_cast<size_t>(k)]) {
      placed[static_cast<size_t>(k)] = true;
      keys_by_appearance.push_back(k);
    }
  }
  std::vector<Key> key_by_id(key_actions.size());
  for (const auto& [key, id] : key_index) key_by_id[static_cast<size_t>(id)] = key;
  std::stable_sort(keys_by_appearance.begin(), keys_by_appearance.end(),
                   [&](int a, int b) {
                     return key_by_id[static_cast<size_t>(a)].first <
                            key_by_id[static_cast<size_t>(b)].first;
                   });
  std::vector<InfosetId> infoset_of_key(key_actions.size(), kNoInfoset);

  GameTree tree;
  tree.name = name_;
  tree.num_players = num_players_;
  for (int k : keys_by_appearance) {
    infoset_of_key[static_cast<size_t>(k)] = static_cast<InfosetId>(tree.infosets.size());
    const Key& key = key_by_id[static_cast<size_t>(k)];
    Infoset info;
    info.owner = key.first;
    info.label = (!key.second.empty() && key.second[0] == '\x01') ? "" : key.second;
    info.actions = key_actions[static_cast<size_t>(k)];
    tree.infosets.push_back(std::move(info));
  }

  tree.nodes.resize(static_cast<size_t>(n));
  for (int h : order) {
    const PendingNode& p = pending_[static_cast<size_t>(h)];
    Node& node = tree.nodes[static_cast<size_t>(new_id[static_cast<size_t>(h)])];
    node.kind = p.kind;
    node.parent = p.parent < 0 ? kNoNode : new_id[static_cast<size_t>(p.parent)];
    node.depth = depth[static_cast<size_t>(h)];
    const int k = key_id[static_cast<size_t>(h)];
    node.infoset = k < 0 ? kNoInfoset : infoset_of_key[static_cast<size_t>(k)];
    node.incoming_action = action_index(h);
    node.chance_prob = p.chance_prob;
    node.payoffs = p.payoffs;
    if (node.parent != kNoNode)
      tree.nodes[static_cast<size_t>(node.parent)].children.push_back(
          new_id[static_cast<size_t>(h)]);
  }
  return tree;
}

GameTree GameBuilder::Build() const {
  GameTree tree = BuildUnchecked();
  ValidationReport report = Validate(tree);
  if (!report.ok()) throw GameError("invalid game '" + name_ + "':\n" + report.Summary());
  return tree;
}

}  // namespace cfrmat
