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

#include "cfrmat/builtin_games.h"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace cfrmat {
namespace {

class KuhnBuilder {
 public:
  explicit KuhnBuilder(int num_players)
      : num_players_(num_players),
        builder_("kuhn_poker(players=" + std::to_string(num_players) + ")",
                 num_players) {}

  GameTree Build() {
    const int root = builder_.AddNode(-1, NodeKind::kChance, "");
    AddDeal(root, {});
    return builder_.Build();
  }

 private:
  void AddDeal(int chance_node, const std::vector<int>& dealt) {
    std::vector<int> remaining;
    for (int card = 0; card <= num_players_; ++card)
      if (std::find(dealt.begin(), dealt.end(), card) == dealt.end())
        remaining.push_back(card);
    const double prob = 1.0 / static_cast<double>(remaining.size());
    for (int card : remaining) {
      std::vector<int> next = dealt;
      next.push_back(card);
      const bool last = static_cast<int>(next.size()) == num_players_;
      const int child = builder_.AddNode(
          chance_node, last ? NodeKind::kDecision : NodeKind::kChance,
          std::to_string(card));
      builder_.SetChanceProbability(child, prob);
      if (last)
        AddBetting(child, next, "");
      else
        AddDeal(child, next);
    }
  }

  // Seat that acts after `history`, or -1 when the hand is over.
  int Actor(const std::string& history) const {
    const size_t bet = history.find('b');
    if (bet == std::string::npos)
      return static_cast<int>(history.size()) < num_players_
                 ? static_cast<int>(history.size())
                 : -1;
    const int responses = static_cast<int>(history.size() - bet) - 1;
    if (responses == num_players_ - 1) return -1;
    return (static_cast<int>(bet) + 1 + responses) % num_players_;
  }

  std::vector<double> Payoffs(const std::vector<int>& cards,
                              const std::string& history) const {
    std::vector<int> contribution(static_cast<size_t>(num_players_), 1);
    std::vector<bool> in_showdown(static_cast<size_t>(num_players_), true);
    const size_t bet = history.find('b');
    if (bet != std::string::npos) {
      std::fill(in_showdown.begin(), in_showdown.end(), false);
      const int bettor = static_cast<int>(bet);
      contribution[static_cast<size_t>(bettor)] = 2;
      in_showdown[static_cast<size_t>(bettor)] = true;
      for (size_t j = bet + 1; j < history.size(); ++j) {
        const auto seat = static_cast<size_t>((bettor + static_cast<int>(j - bet)) % num_players_);
        if (history[j] == 'b') {
          contribution[seat] = 2;
          in_showdown[seat] = true;
        }
      }
    }
    int winner = -1;
    for (int seat = 0; seat < num_players_; ++seat)
      if (in_showdown[static_cast<size_t>(seat)] &&
          (winner < 0 || cards[static_cast<size_t>(seat)] > cards[static_cast<size_t>(winner)]))
        winner = seat;
    int pot = 0;
    for (int c : contribution) pot += c;
    std::vector<double> payoffs(static_cast<size_t>(num_players_));
    for (int seat = 0; seat < num_players_; ++seat)
      payoffs[static_cast<size_t>(seat)] =
          (seat == winner ? pot : 0) - contribution[static_cast<size_t>(seat)];
    return payoffs;
  }

  void AddBetting(int node, const std::vector<int>& cards,
                  const std::string& history) {
    const int seat = Actor(history);
    builder_.SetInfoset(node, seat + 1,
                        std::to_string(cards[static_cast<size_t>(seat)]) + history);
    for (const char* action : {"p", "b"}) {
      const std::string next = history + action;
      if (Actor(next) < 0) {
        const int leaf = builder_.AddNode(node, NodeKind::kTerminal, action);
        builder_.SetPayoffs(leaf, Payoffs(cards, next));
      } else {
        const int child = builder_.AddNode(node, NodeKind::kDecision, action);
        AddBetting(child, cards, next);
      }
    }
  }

  int num_players_;
  GameBuilder builder_;
};

void CheckRange(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("RandomGameSpec: ") + what);
}

}  // namespace

GameTree KuhnPoker(int num_players) {
  if (num_players < 2 || num_players > 4)
    throw std::invalid_argument("kuhn poker supports 2 to 4 players, got " +
                                std::to_string(num_players));
  return KuhnBuilder(num_players).Build();
}

GameTree SignalGame() {
  GameBuilder b("signal", 2);
  const int root = b.AddNode(-1, NodeKind::kChance, "");
  for (int s = 0; s < 2; ++s) {
    const std::string state = "s" + std::to_string(s);
    const int sender = b.AddNode(root, NodeKind::kDecision, state);
    b.SetChanceProbability(sender, 0.5);
    b.SetInfoset(sender, 1, state);
    for (int m = 0; m < 2; ++m) {
      const std::string message = "m" + std::to_string(m);
      const int receiver = b.AddNode(sender, NodeKind::kDecision, message);
      b.SetInfoset(receiver, 2, message);
      for (int r = 0; r < 2; ++r) {
        const int leaf = b.AddNode(receiver, NodeKind::kTerminal, "r" + std::to_string(r));
        const double u1 = 2.0 * (r == 1) - 0.5 * (m != s);
        const double u2 = r == s ? 1.0 : 0.0;
        b.SetPayoffs(leaf, {u1, u2});
      }
    }
  }
  return b.Build();
}

std::uint64_t SplitMix64::Next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::NextDouble() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

int SplitMix64::NextInt(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(Next() % span);
}

GameTree RandomGame(const RandomGameSpec& spec) {
  CheckRange(spec.max_depth >= 1 && spec.max_depth <= 12, "max_depth must be in 1..12");
  CheckRange(spec.max_branching >= 2 && spec.max_branching <= 6,
             "max_branching must be in 2..6");
  CheckRange(spec.num_players >= 1 && spec.num_players <= 4, "num_players must be in 1..4");
  CheckRange(spec.chance_node_fraction >= 0.0 && spec.chance_node_fraction <= 1.0,
             "chance_node_fraction must be in [0,1]");
  CheckRange(spec.terminal_fraction_ramp >= 0.0 && spec.terminal_fraction_ramp <= 1.0,
             "terminal_fraction_ramp must be in [0,1]");
  CheckRange(spec.payoff_min <= spec.payoff_max, "payoff_min must not exceed payoff_max");

  SplitMix64 rng(spec.seed);
  GameBuilder b("random(seed=" + std::to_string(spec.seed) + ")", spec.num_players);

  // Own-action histories are interned as (previous id, infoset, action).
  std::map<std::tuple<int, int, int>, int> history_ids;
  auto extend = [&](int prev, int infoset, int action) {
    auto [it, inserted] = history_ids.emplace(std::tuple(prev, infoset, action),
                                              static_cast<int>(history_ids.size()) + 1);
    return it->second;
  };
  struct InfosetInfo {
    int index;
    int num_actions;
    std::string label;
  };
  std::map<std::tuple<int, int, int, int>, InfosetInfo> infosets;

  struct Pending {
    int handle;
    int depth;
    NodeKind kind;
    PlayerId player;
    std::vector<int> history;  // per seat, 0 = empty
  };
  auto make_node = [&](int parent, int depth, std::string action,
                       const std::vector<int>& history) -> Pending {
    const double terminal_prob = spec.terminal_fraction_ramp * (depth + 1) / spec.max_depth;
    NodeKind kind;
    PlayerId player = kChancePlayer;
    if (depth >= spec.max_depth || rng.NextDouble() < terminal_prob) {
      kind = NodeKind::kTerminal;
    } else if (rng.NextDouble() < spec.chance_node_fraction) {
      kind = NodeKind::kChance;
    } else {
      kind = NodeKind::kDecision;
      player = rng.NextInt(1, spec.num_players);
    }
    const int handle = b.AddNode(parent, kind, std::move(action));
    if (kind == NodeKind::kTerminal) {
      std::vector<double> payoffs(static_cast<size_t>(spec.num_players));
      for (double& p : payoffs)
        p = spec.payoff_min + (spec.payoff_max - spec.payoff_min) * rng.NextDouble();
      b.SetPayoffs(handle, std::move(payoffs));
    }
    return Pending{handle, depth, kind, player, history};
  };

  std::deque<Pending> queue;
  queue.push_back(make_node(-1, 0, "", std::vector<int>(static_cast<size_t>(spec.num_players), 0)));
  while (!queue.empty()) {
    Pending node = std::move(queue.front());
    queue.pop_front();
    if (node.kind == NodeKind::kTerminal) continue;
    if (node.kind == NodeKind::kChance) {
      const int k = rng.NextInt(2, spec.max_branching);
      std::vector<double> weights(static_cast<size_t>(k));
      double total = 0.0;
      for (double& w : weights) total += (w = 0.1 + 0.9 * rng.NextDouble());
      for (int a = 0; a < k; ++a) {
        Pending child = make_node(node.handle, node.depth + 1, "c" + std::to_string(a),
                                  node.history);
        b.SetChanceProbability(child.handle, weights[static_cast<size_t>(a)] / total);
        queue.push_back(std::move(child));
      }
      continue;
    }
    const auto seat = static_cast<size_t>(node.player - 1);
    const int bucket = rng.NextInt(0, 1);
    const auto key = std::tuple(node.depth, node.player, node.history[seat], bucket);
    auto it = infosets.find(key);
    if (it == infosets.end()) {
      const int k = rng.NextInt(2, spec.max_branching);
      std::string label = "d" + std::to_string(node.depth) + ".h" +
                          std::to_string(node.history[seat]) + ".o" + std::to_string(bucket);
      it = infosets.emplace(key, InfosetInfo{static_cast<int>(infosets.size()), k,
                                             std::move(label)}).first;
    }
    const InfosetInfo& info = it->second;
    b.SetInfoset(node.handle, node.player, info.label);
    for (int a = 0; a < info.num_actions; ++a) {
      std::vector<int> history = node.history;
      history[seat] = extend(history[seat], info.index, a);
      queue.push_back(make_node(node.handle, node.depth + 1, "a" + std::to_string(a), history));
    }
  }
  return b.Build();
}

bool IsBuiltinGameName(std::string_view name) {
  return name == "kuhn2" || name == "kuhn3" || name == "kuhn4" || name == "signal" ||
         name.starts_with("random:");
}

GameTree BuiltinGame(std::string_view name) {
  if (name == "kuhn2") return KuhnPoker(2);
  if (name == "kuhn3") return KuhnPoker(3);
  if (name == "kuhn4") return KuhnPoker(4);
  if (name == "signal") return SignalGame();
  if (name.starts_with("random:")) {
    const std::string_view digits = name.substr(7);
    RandomGameSpec spec;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), spec.seed);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
      throw std::invalid_argument("bad random game seed in '" + std::string(name) + "'");
    return RandomGame(spec);
  }
  throw std::invalid_argument("unknown builtin game '" + std::string(name) + "'");
}

}  // namespace cfrmat
