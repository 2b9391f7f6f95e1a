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

// Independent reference computations shared by the tests: dense linear
// algebra, per-node reach and value by walking the tree, and best response
// by exhaustive pure-strategy enumeration. Deliberately naive.

#ifndef CFRMAT_TESTS_TEST_ORACLES_H_
#define CFRMAT_TESTS_TEST_ORACLES_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfrmat/builtin_games.h"
#include "cfrmat/csr.h"
#include "cfrmat/game.h"
#include "cfrmat/oracle.h"

namespace cfrmat::testing {

// Random-game parameters used throughout the test corpus.
RandomGameSpec CorpusRandomSpec(std::uint64_t seed);

struct NamedGame {
  std::string name;
  GameTree tree;
};

// kuhn2, kuhn3, kuhn4, signal, and random games for seeds 1..num_random.
std::vector<NamedGame> Corpus(int num_random = 20);

double MaxAbsDiff(std::span<const double> a, std::span<const double> b);
double MaxAbsDiff(const FullStrategy& a, const FullStrategy& b);

// Dense row-major y = A x and C = A B.
std::vector<double> DenseMatVec(const std::vector<double>& a, Index rows, Index cols,
                                const std::vector<double>& x);
std::vector<double> DenseMatMul(const std::vector<double>& a, Index rows, Index inner,
                                const std::vector<double>& b, Index cols);

CsrMatrix<double> RandomCsr(SplitMix64& rng, Index rows, Index cols, double density);
std::vector<double> RandomVector(SplitMix64& rng, size_t n, double lo = -1.0, double hi = 1.0);

// Probability of the edge into v.
double EdgeProb(const GameTree& tree, const FullStrategy& fs, NodeId v);
// Reach of v through everyone except `player` (1-based), walking parents.
double ReachExcluding(const GameTree& tree, const FullStrategy& fs, NodeId v, PlayerId player);
// Reach of v through `player`'s own actions only.
double ReachOwn(const GameTree& tree, const FullStrategy& fs, NodeId v, PlayerId player);
// Expected payoffs below v, by recursion.
std::vector<double> NodeValue(const GameTree& tree, const FullStrategy& fs, NodeId v);

// Best-response value by trying every pure strategy of `player`. Throws
// if there are more than `limit` pure strategies.
double EnumeratedBestResponse(const GameTree& tree, const FullStrategy& fs, PlayerId player,
                              std::uint64_t limit = 1u << 20);

}  // namespace cfrmat::testing

#endif  // CFRMAT_TESTS_TEST_ORACLES_H_
