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

#ifndef CFRMAT_BUILTIN_GAMES_H_
#define CFRMAT_BUILTIN_GAMES_H_

#include <cstdint>
#include <string_view>

#include "cfrmat/game.h"

namespace cfrmat {

// Kuhn poker with num_players + 1 cards (ranks 0..num_players), ante 1 and a
// single bet of 1. Cards are dealt by a chain of chance nodes, one per
// player. Players act in seat order choosing "p" (pass) or "b" (bet); after
// the first bet every other player, in seat order starting after the bettor,
// gets one call ("b") or fold ("p") decision. The highest card among the
// players who did not fold takes the pot.
//
// Infoset labels are the owner's card followed by the public action
// history, e.g. "2pb". Supported player counts: 2, 3, 4.
GameTree KuhnPoker(int num_players);

// Two-state signaling game. Chance picks a state s in {0,1} with
// probability 1/2; player 1 sees s and sends a message m in {0,1}; player 2
// sees only m and replies r in {0,1}. Payoffs (player 1, player 2):
//
//   u1 = 2 * [r == 1] - 0.5 * [m != s]
//   u2 = [r == s]
//
// Player 1 always wants reply 1 and pays a small cost for lying; player 2
// wants to match the state. The game is general-sum.
GameTree SignalGame();

// SplitMix64 (Steele, Lea, Flood 2014). The constants are fixed so every
// implementation of the generator produces the same corpus:
//   state += 0x9E3779B97F4A7C15
//   z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next();
  // Uniform in [0, 1) from the top 53 bits.
  double NextDouble();
  // Uniform integer in [lo, hi].
  int NextInt(int lo, int hi);

 private:
  std::uint64_t state_;
};

struct RandomGameSpec {
  std::uint64_t seed = 0;
  int max_depth = 6;          // 1..12
  int max_branching = 3;      // 2..6
  int num_players = 2;        // 1..4
  double chance_node_fraction = 0.2;
  // A node at depth d becomes terminal with probability
  // terminal_fraction_ramp * (d + 1) / max_depth; depth max_depth is always
  // terminal.
  double terminal_fraction_ramp = 0.3;
  double payoff_min = -1.0;
  double payoff_max = 1.0;
};

// Deterministic in the spec. Decision nodes of the same player at the same
// depth with the same own-action history share an infoset when they also
// draw the same observation bucket (two buckets), so the result always has
// perfect recall. Throws std::invalid_argument for out-of-range fields.
GameTree RandomGame(const RandomGameSpec& spec);

// Resolves "kuhn2", "kuhn3", "kuhn4", "signal" or "random:<seed>" (default
// RandomGameSpec ranges). Throws std::invalid_argument for unknown names.
GameTree BuiltinGame(std::string_view name);
bool IsBuiltinGameName(std::string_view name);

}  // namespace cfrmat

#endif  // CFRMAT_BUILTIN_GAMES_H_
