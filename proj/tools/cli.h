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

#ifndef CFRMAT_TOOLS_CLI_H_
#define CFRMAT_TOOLS_CLI_H_

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfrmat/game.h"

namespace cfrmat::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr char kMetricsHeader[] = "iteration,wall_ms,exploitability,nash_conv";
inline constexpr char kBenchHeader[] = "game,nodes,infosets,impl,mean_ms,sem_ms";
inline constexpr char kStrategyHeader[] = "player,infoset,action,probability";

// Loads a builtin game by name (kuhn2, kuhn3, kuhn4, signal, random:<seed>)
// or parses a game-text file. Throws InputError for unreadable files.
GameTree LoadGame(const std::string& source);

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Formats a value with 17 significant digits.
std::string FormatReal(double x);

// Runs the cfrmat command line. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int RunCli(int argc, char** argv);

}  // namespace cfrmat::cli

#endif  // CFRMAT_TOOLS_CLI_H_
