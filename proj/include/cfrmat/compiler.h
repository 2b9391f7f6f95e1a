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

#ifndef CFRMAT_COMPILER_H_
#define CFRMAT_COMPILER_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfrmat/csr.h"
#include "cfrmat/game.h"

namespace cfrmat {

struct GameDims {
  Index num_nodes = 0;      // |V|
  Index num_terminals = 0;  // |T|
  Index num_decisions = 0;  // non-terminal nodes, chance included
  Index num_infosets = 0;   // rational-player infosets, |H+|
  Index num_pairs = 0;      // rational infoset-action pairs, |Q+|
  Index num_players = 0;    // |I+|
  Index depth = 0;          // D

  bool operator==(const GameDims&) const = default;
};

// Labels and ids behind the rows of the infoset (H+) and infoset-action
// (Q+) spaces. Node rows coincide with GameTree node ids.
struct IndexMaps {
  std::vector<PlayerId> infoset_owner;      // per H+ row
  std::vector<InfosetId> infoset_id;        // per H+ row, id in the source tree
  std::vector<std::string> infoset_label;   // per H+ row
  std::vector<Index> pair_infoset;          // per Q+ row, H+ row
  std::vector<ActionId> pair_action;        // per Q+ row
  std::vector<std::string> pair_label;      // per Q+ row

  bool operator==(const IndexMaps&) const = default;
};

// Constant matrices of one game. Transposes are formed once here because
// every iteration needs them.
struct CompiledGame {
  std::string name;
  GameDims dims;

  CsrMatrix<double> g;                 // |V|x|V| adjacency, parent -> child
  CsrMatrix<double> g_t;
  std::vector<CsrMatrix<double>> levels;    // levels[l-1] = L^(l), l = 1..D
  std::vector<CsrMatrix<double>> levels_t;
  CsrMatrix<double> m_qv;              // |Q+|x|V|: pair that leads to the node
  CsrMatrix<double> m_qv_t;
  CsrMatrix<double> m_hq;              // |H+|x|Q+|: infoset of the pair
  CsrMatrix<double> m_hq_t;
  DenseMatrix<double> m_vi;            // |V|x|I+|: player who acted into the node
  std::vector<double> s_sigma0;        // |V| chance probabilities
  DenseMatrix<double> u_term;          // |V|x|I+| terminal payoffs
  std::vector<double> sigma1;          // |Q+| uniform initial strategy
  IndexMaps maps;

  bool operator==(const CompiledGame&) const = default;
};

struct CompileStats {
  // Nodes visited while building; equals |V| for a single traversal.
  Index visits = 0;
  double seconds = 0.0;
};

// Builds every constant from a single pass over the nodes. Rejects invalid
// trees with GameError.
CompiledGame Compile(const GameTree& tree, CompileStats* stats = nullptr);

// 1 - nnz / (rows * cols). Throws DimensionError for a zero-sized matrix.
double Sparsity(const CsrMatrix<double>& m);

// Mean sparsity of the level graphs; throws DimensionError when D = 0.
double MeanLevelSparsity(const CompiledGame& cg);

// Rebuilds a GameTree equivalent to the compiled one. Rational infosets keep
// their labels; chance nodes become anonymous per-node chance infosets with
// actions named by child position.
GameTree Decompile(const CompiledGame& cg);

// Binary container. See container.cc for the byte layout.
inline constexpr std::uint16_t kContainerVersion = 1;

class ContainerError : public std::runtime_error {
 public:
  enum class Kind { kBadMagic, kVersionMismatch, kTruncated, kChecksum, kMalformed, kIo };
  ContainerError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::uint64_t WriteCompiled(const CompiledGame& cg, std::ostream& sink);
CompiledGame ReadCompiled(std::istream& source);

std::string WriteCompiledToString(const CompiledGame& cg);
CompiledGame ReadCompiledFromString(const std::string& bytes);

}  // namespace cfrmat

#endif  // CFRMAT_COMPILER_H_
