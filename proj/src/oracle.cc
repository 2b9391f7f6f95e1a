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

#include "cfrmat/oracle.h"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace cfrmat {
namespace {

size_t At(Index i) { return static_cast<size_t>(i); }

// Probability of the edge into `v` under fs (chance probabilities come from
// the tree).
double EdgeProbability(const GameTree& tree, const FullStrategy& fs, NodeId v) {
  const Node& node = tree.node(v);
  const Node& parent = tree.node(node.parent);
  if (parent.kind == NodeKind::kChance) return node.chance_prob;
  return fs.probs[At(parent.infoset)][At(node.incoming_action)];
}

void CheckStrategyShape(const GameTree& tree, const FullStrategy& fs) {
  if (fs.probs.size() != tree.infosets.size())
    throw std::invalid_argument("strategy covers " + std::to_string(fs.probs.size()) +
                                " infosets, tree has " + std::to_string(tree.infosets.size()));
  for (size_t h = 0; h < fs.probs.size(); ++h)
    if (fs.probs[h].size() != tree.infosets[h].actions.size())
      throw std::invalid_argument("strategy for infoset " + std::to_string(h) +
                                  " has the wrong number of actions");
}

// Chance infosets may be shared; their probabilities are read off the first
// member node.
void FillChance(const GameTree& tree, FullStrategy& fs) {
  std::vector<char> done(tree.infosets.size(), 0);
  for (const Node& node : tree.nodes) {
    if (node.kind != NodeKind::kChance || done[At(node.infoset)]) continue;
    done[At(node.infoset)] = 1;
    auto& probs = fs.probs[At(node.infoset)];
    for (NodeId c : node.children) probs[At(tree.node(c).incoming_action)] = tree.node(c).chance_prob;
  }
}

// Tree infoset id of every H+ row, matched by (owner, label).
std::vector<InfosetId> TreeInfosetsOfRows(const GameTree& tree, const IndexMaps& maps) {
  std::map<std::pair<PlayerId, std::string>, InfosetId> by_label;
  for (InfosetId h = 0; h < static_cast<InfosetId>(tree.infosets.size()); ++h)
    if (tree.infoset(h).owner != kChancePlayer)
      by_label.emplace(std::make_pair(tree.infoset(h).owner, tree.infoset(h).label), h);
  std::vector<InfosetId> rows;
  for (size_t r = 0; r < maps.infoset_owner.size(); ++r) {
    auto it = by_label.find({maps.infoset_owner[r], maps.infoset_label[r]});
    if (it == by_label.end() ||
        tree.infoset(it->second).actions.size() !=
            static_cast<size_t>(std::count(maps.pair_infoset.begin(), maps.pair_infoset.end(),
                                           static_cast<Index>(r))))
      throw std::invalid_argument("infoset '" + maps.infoset_label[r] + "' of player " +
                                  std::to_string(maps.infoset_owner[r]) +
                                  " does not match the tree");
    rows.push_back(it->second);
  }
  return rows;
}

}  // namespace

FullStrategy UniformStrategy(const GameTree& tree) {
  FullStrategy fs;
  for (const Infoset& info : tree.infosets) {
    const double n = static_cast<double>(info.actions.size());
    fs.probs.emplace_back(info.actions.size(), 1.0 / n);
  }
  FillChance(tree, fs);
  return fs;
}

FullStrategy StrategyFromPairs(const GameTree& tree, const IndexMaps& maps,
                               const std::vector<double>& pairs) {
  if (pairs.size() != maps.pair_infoset.size())
    throw std::invalid_argument("pair vector has " + std::to_string(pairs.size()) +
                                " entries, expected " + std::to_string(maps.pair_infoset.size()));
  const std::vector<InfosetId> rows = TreeInfosetsOfRows(tree, maps);
  FullStrategy fs = UniformStrategy(tree);
  for (size_t q = 0; q < pairs.size(); ++q)
    fs.probs[At(rows[At(maps.pair_infoset[q])])][At(maps.pair_action[q])] = pairs[q];
  return fs;
}

std::vector<double> PairsFromStrategy(const GameTree& tree, const IndexMaps& maps,
                                      const FullStrategy& fs) {
  CheckStrategyShape(tree, fs);
  const std::vector<InfosetId> rows = TreeInfosetsOfRows(tree, maps);
  std::vector<double> pairs(maps.pair_infoset.size());
  for (size_t q = 0; q < pairs.size(); ++q)
    pairs[q] = fs.probs[At(rows[At(maps.pair_infoset[q])])][At(maps.pair_action[q])];
  return pairs;
}

std::vector<double> ExpectedPayoff(const GameTree& tree, const FullStrategy& fs) {
  CheckStrategyShape(tree, fs);
  // Node ids are breadth-first, so parents precede children.
  std::vector<double> reach(tree.nodes.size(), 0.0);
  std::vector<double> value(static_cast<size_t>(tree.num_players), 0.0);
  for (NodeId v = 0; v < tree.num_nodes(); ++v) {
    const Node& node = tree.node(v);
    reach[At(v)] = node.parent == kNoNode ? 1.0
                                          : reach[At(node.parent)] * EdgeProbability(tree, fs, v);
    if (node.kind == NodeKind::kTerminal)
      for (size_t i = 0; i < value.size(); ++i) value[i] += reach[At(v)] * node.payoffs[i];
  }
  return value;
}

double BestResponseValue(const GameTree& tree, const FullStrategy& fs, PlayerId player) {
  CheckStrategyShape(tree, fs);
  if (player < 1 || player > tree.num_players)
    throw std::invalid_argument("player " + std::to_string(player) + " out of range");
  const auto col = static_cast<size_t>(player - 1);

  // Reach of chance and the other players.
  std::vector<double> opp_reach(tree.nodes.size(), 0.0);
  for (NodeId v = 0; v < tree.num_nodes(); ++v) {
    const Node& node = tree.node(v);
    if (node.parent == kNoNode) {
      opp_reach[At(v)] = 1.0;
      continue;
    }
    const Node& parent = tree.node(node.parent);
    const bool own = parent.kind == NodeKind::kDecision && tree.infoset(parent.infoset).owner == player;
    opp_reach[At(v)] = opp_reach[At(node.parent)] * (own ? 1.0 : EdgeProbability(tree, fs, v));
  }

  std::vector<std::vector<NodeId>> members(tree.infosets.size());
  for (NodeId v = 0; v < tree.num_nodes(); ++v)
    if (tree.node(v).kind == NodeKind::kDecision) members[At(tree.node(v).infoset)].push_back(v);

  // cv(v): opponent-reach-weighted payoff below v when `player` best
  // responds. choice[h]: the best action at each of the player's infosets.
  std::vector<double> cv(tree.nodes.size(), 0.0);
  std::vector<char> cv_done(tree.nodes.size(), 0);
  std::vector<ActionId> choice(tree.infosets.size(), kNoAction);

  std::function<double(NodeId)> value = [&](NodeId v) -> double {
    if (cv_done[At(v)]) return cv[At(v)];
    const Node& node = tree.node(v);
    double result = 0.0;
    if (node.kind == NodeKind::kTerminal) {
      result = opp_reach[At(v)] * node.payoffs[col];
    } else if (node.kind == NodeKind::kDecision && tree.infoset(node.infoset).owner == player) {
      const InfosetId h = node.infoset;
      if (choice[At(h)] == kNoAction) {
        const auto num_actions = tree.infoset(h).actions.size();
        std::vector<double> totals(num_actions, 0.0);
        for (NodeId m : members[At(h)]) {
          const Node& member = tree.node(m);
          for (NodeId c : member.children) totals[At(tree.node(c).incoming_action)] += value(c);
        }
        ActionId best = 0;
        for (size_t a = 1; a < num_actions; ++a)
          if (totals[a] > totals[At(best)]) best = static_cast<ActionId>(a);
        choice[At(h)] = best;
      }
      result = value(node.children[At(choice[At(h)])]);
    } else {
      for (NodeId c : node.children) result += value(c);
    }
    cv[At(v)] = result;
    cv_done[At(v)] = 1;
    return result;
  };
  return value(0);
}

double NashConv(const GameTree& tree, const FullStrategy& fs) {
  const std::vector<double> expected = ExpectedPayoff(tree, fs);
  double total = 0.0;
  for (PlayerId i = 1; i <= tree.num_players; ++i)
    total += BestResponseValue(tree, fs, i) - expected[static_cast<size_t>(i - 1)];
  return total;
}

double Exploitability(const GameTree& tree, const FullStrategy& fs) {
  return NashConv(tree, fs) / static_cast<double>(tree.num_players);
}

RecursiveCfr::RecursiveCfr(const GameTree& tree)
    : tree_(tree),
      sigma_(UniformStrategy(tree)),
      reach_sum_(tree.infosets.size(), 0.0),
      regret_term_(tree.nodes.size(), 0.0),
      own_reach_(tree.nodes.size(), 0.0) {
  ValidationReport report = Validate(tree);
  if (!report.ok()) throw GameError("invalid game '" + tree.name + "':\n" + report.Summary());
  for (const Infoset& info : tree.infosets) {
    avg_regret_.emplace_back(info.actions.size(), 0.0);
    r_inst_.emplace_back(info.actions.size(), 0.0);
    weighted_sum_.emplace_back(info.actions.size(), 0.0);
  }
}

// Returns the expected payoffs of node v. pi_check[i] is the reach of v
// through everyone but player i; pi_hat[i] through player i's own actions.
std::vector<double> RecursiveCfr::Walk(NodeId v, const std::vector<double>& pi_check,
                                       const std::vector<double>& pi_hat) {
  const Node& node = tree_.node(v);
  const auto num_players = static_cast<size_t>(tree_.num_players);
  if (node.kind == NodeKind::kTerminal) return node.payoffs;

  std::vector<double> u(num_players, 0.0);
  const bool chance = node.kind == NodeKind::kChance;
  const size_t actor = chance ? num_players : static_cast<size_t>(tree_.infoset(node.infoset).owner - 1);
  if (!chance) own_reach_[At(v)] = pi_hat[actor];

  std::vector<std::vector<double>> child_values;
  child_values.reserve(node.children.size());
  for (NodeId c : node.children) {
    const Node& child = tree_.node(c);
    const double p = chance ? child.chance_prob
                            : sigma_.probs[At(node.infoset)][At(child.incoming_action)];
    std::vector<double> check(pi_check), hat(pi_hat);
    for (size_t i = 0; i < num_players; ++i) {
      if (i == actor) hat[i] *= p;
      else check[i] *= p;
    }
    child_values.push_back(Walk(c, check, hat));
    for (size_t i = 0; i < num_players; ++i) u[i] += p * child_values.back()[i];
  }
  if (!chance) {
    // Cancelled counterfactual regret: the opponents' reach of the child
    // equals that of v, and the counterfactual-reach division of the
    // utility definition cancels against the regret's reach factor.
    for (size_t k = 0; k < node.children.size(); ++k)
      regret_term_[At(node.children[k])] = pi_check[actor] * (child_values[k][actor] - u[actor]);
  }
  return u;
}

void RecursiveCfr::Iterate() {
  ++iteration_;
  const auto num_players = static_cast<size_t>(tree_.num_players);
  root_value_ = Walk(0, std::vector<double>(num_players, 1.0), std::vector<double>(num_players, 1.0));

  // Aggregate per infoset in ascending node order.
  for (auto& row : r_inst_) std::fill(row.begin(), row.end(), 0.0);
  std::vector<double> reach(tree_.infosets.size(), 0.0);
  for (NodeId v = 0; v < tree_.num_nodes(); ++v) {
    const Node& node = tree_.node(v);
    if (node.kind == NodeKind::kDecision) reach[At(node.infoset)] += own_reach_[At(v)];
    if (node.parent == kNoNode) continue;
    const Node& parent = tree_.node(node.parent);
    if (parent.kind != NodeKind::kDecision) continue;
    r_inst_[At(parent.infoset)][At(node.incoming_action)] += regret_term_[At(v)];
  }

  for (InfosetId h = 0; h < static_cast<InfosetId>(tree_.infosets.size()); ++h) {
    if (tree_.infoset(h).owner == kChancePlayer) continue;
    auto& sigma = sigma_.probs[At(h)];
    // Running sums for the weighted average strategy.
    reach_sum_[At(h)] += reach[At(h)];
    for (size_t a = 0; a < sigma.size(); ++a) weighted_sum_[At(h)][a] += reach[At(h)] * sigma[a];
    // Average regret and regret matching.
    auto& regret = avg_regret_[At(h)];
    double positive = 0.0;
    for (size_t a = 0; a < regret.size(); ++a) {
      regret[a] += (r_inst_[At(h)][a] - regret[a]) / static_cast<double>(iteration_);
      positive += regret[a] > 0.0 ? regret[a] : 0.0;
    }
    for (size_t a = 0; a < sigma.size(); ++a)
      sigma[a] = positive > 0.0 ? (regret[a] > 0.0 ? regret[a] : 0.0) / positive
                                : 1.0 / static_cast<double>(sigma.size());
  }
}

FullStrategy RecursiveCfr::AverageSigma() const {
  FullStrategy avg = UniformStrategy(tree_);
  for (InfosetId h = 0; h < static_cast<InfosetId>(tree_.infosets.size()); ++h) {
    if (tree_.infoset(h).owner == kChancePlayer || reach_sum_[At(h)] == 0.0) continue;
    for (size_t a = 0; a < avg.probs[At(h)].size(); ++a)
      avg.probs[At(h)][a] = weighted_sum_[At(h)][a] / reach_sum_[At(h)];
  }
  return avg;
}

std::vector<CfrSnapshot> RecursiveCfrTrajectory(const GameTree& tree, int iterations) {
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  RecursiveCfr cfr(tree);
  std::vector<CfrSnapshot> out;
  out.reserve(static_cast<size_t>(iterations));
  for (int t = 0; t < iterations; ++t) {
    cfr.Iterate();
    out.push_back(CfrSnapshot{cfr.sigma(), cfr.AverageSigma()});
  }
  return out;
}

}  // namespace cfrmat
