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

// Reference implementations that work directly on the GameTree: textbook
// recursive vanilla CFR, expected payoff, best response, and
// exploitability. They are the ground truth the matrix solver is tested
// against.

#ifndef CFRMAT_ORACLE_H_
#define CFRMAT_ORACLE_H_

#include <vector>

#include "cfrmat/compiler.h"
#include "cfrmat/game.h"

namespace cfrmat {

// Behavioral strategy over every infoset of a tree, chance included:
// probs[h][a] is the probability of action a at tree infoset h. Chance
// entries hold the game's fixed probabilities.
struct FullStrategy {
  std::vector<std::vector<double>> probs;

  bool operator==(const FullStrategy&) const = default;
};

// Uniform over the actions of each rational infoset.
FullStrategy UniformStrategy(const GameTree& tree);

// Converts between a FullStrategy and a vector over the Q+ rows of a
// compiled game. Infosets are matched by (owner, label), so `tree` may be
// the source tree or a decompiled copy.
FullStrategy StrategyFromPairs(const GameTree& tree, const IndexMaps& maps,
                               const std::vector<double>& pairs);
std::vector<double> PairsFromStrategy(const GameTree& tree, const IndexMaps& maps,
                                      const FullStrategy& fs);

// Expected payoff of every rational player, by enumerating terminals.
std::vector<double> ExpectedPayoff(const GameTree& tree, const FullStrategy& fs);

// Value of an exact best response of `player` (1-based) against fs. Ties
// between actions go to the lowest action id. Requires perfect recall.
double BestResponseValue(const GameTree& tree, const FullStrategy& fs, PlayerId player);

// Sum over players of best-response gain; exploitability is NashConv / P.
double NashConv(const GameTree& tree, const FullStrategy& fs);
double Exploitability(const GameTree& tree, const FullStrategy& fs);

// Vanilla CFR by depth-first recursion over the tree, with simultaneous
// updates. The average strategy is kept as explicit running sums of
// reach-weighted strategies and their weights.
class RecursiveCfr {
 public:
  explicit RecursiveCfr(const GameTree& tree);

  void Iterate();

  int iteration() const { return iteration_; }
  const FullStrategy& sigma() const { return sigma_; }
  // Reach-weighted average of all strategies so far; uniform at infosets
  // never reached by their owner.
  FullStrategy AverageSigma() const;
  // Infoset-aggregated counterfactual regrets of the last iteration.
  const std::vector<std::vector<double>>& instantaneous_regret() const { return r_inst_; }
  // Expected payoffs at the root under the strategy of the last iteration.
  const std::vector<double>& root_value() const { return root_value_; }

 private:
  std::vector<double> Walk(NodeId v, const std::vector<double>& pi_check,
                           const std::vector<double>& pi_hat);

  const GameTree tree_;
  int iteration_ = 0;
  FullStrategy sigma_;
  std::vector<std::vector<double>> avg_regret_;
  std::vector<std::vector<double>> r_inst_;
  std::vector<std::vector<double>> weighted_sum_;  // sum_T reach * sigma
  std::vector<double> reach_sum_;                  // sum_T reach
  std::vector<double> root_value_;

  // Per-iteration scratch indexed by node.
  std::vector<double> regret_term_;  // pi_check * (u(child) - u(parent))
  std::vector<double> own_reach_;    // pi_hat of the acting player at decision nodes
};

struct CfrSnapshot {
  FullStrategy sigma;      // strategy for the next iteration
  FullStrategy avg_sigma;  // average strategy after this iteration
};

// Runs `iterations` iterations and records the strategies after each.
std::vector<CfrSnapshot> RecursiveCfrTrajectory(const GameTree& tree, int iterations);

}  // namespace cfrmat

#endif  // CFRMAT_ORACLE_H_
