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

#include "cfrmat/compiler.h"

#include <algorithm>
#include <chrono>
#include <tuple>

#include "cfrmat/kernels.h"

namespace cfrmat {
namespace {

using Triplets = std::vector<std::tuple<Index, Index, double>>;

}  // namespace

CompiledGame Compile(const GameTree& tree, CompileStats* stats) {
  const auto start = std::chrono::steady_clock::now();
  ValidationReport report = Validate(tree);
  if (!report.ok())
    throw GameError("cannot compile invalid game '" + tree.name + "':\n" + report.Summary());

  CompiledGame cg;
  cg.name = tree.name;
  const Index num_nodes = tree.num_nodes();
  const Index num_players = tree.num_players;
  const int depth = MaxDepth(tree);

  // Row layout of the infoset and infoset-action spaces.
  std::vector<Index> hplus_row(tree.infosets.size(), -1);
  std::vector<Index> pair_offset(tree.infosets.size(), -1);
  IndexMaps& maps = cg.maps;
  for (InfosetId h = 0; h < static_cast<InfosetId>(tree.infosets.size()); ++h) {
    const Infoset& info = tree.infoset(h);
    if (info.owner == kChancePlayer) continue;
    const auto row = static_cast<Index>(maps.infoset_owner.size());
    hplus_row[static_cast<size_t>(h)] = row;
    pair_offset[static_cast<size_t>(h)] = static_cast<Index>(maps.pair_infoset.size());
    maps.infoset_owner.push_back(info.owner);
    maps.infoset_id.push_back(h);
    maps.infoset_label.push_back(info.label);
    for (ActionId a = 0; a < static_cast<ActionId>(info.actions.size()); ++a) {
      maps.pair_infoset.push_back(row);
      maps.pair_action.push_back(a);
      maps.pair_label.push_back(info.actions[static_cast<size_t>(a)]);
    }
  }
  const auto num_infosets = static_cast<Index>(maps.infoset_owner.size());
  const auto num_pairs = static_cast<Index>(maps.pair_infoset.size());

  Triplets g;
  std::vector<Triplets> levels(static_cast<size_t>(depth));
  Triplets m_qv;
  cg.m_vi = DenseMatrix<double>(num_nodes, num_players);
  cg.u_term = DenseMatrix<double>(num_nodes, num_players);
  cg.s_sigma0.assign(static_cast<size_t>(num_nodes), 0.0);
  Index visits = 0;
  Index terminals = 0;

  // The single traversal: node ids are breadth-first, so one ascending scan
  // sees every parent before its children.
  for (NodeId v = 0; v < num_nodes; ++v) {
    ++visits;
    const Node& node = tree.node(v);
    if (node.kind == NodeKind::kTerminal) {
      ++terminals;
      for (Index i = 0; i < num_players; ++i)
        cg.u_term(v, i) = node.payoffs[static_cast<size_t>(i)];
    }
    if (node.parent == kNoNode) continue;
    g.emplace_back(node.parent, v, 1.0);
    levels[static_cast<size_t>(node.depth - 1)].emplace_back(node.parent, v, 1.0);
    const Node& parent = tree.node(node.parent);
    if (parent.kind == NodeKind::kChance) {
      cg.s_sigma0[static_cast<size_t>(v)] = node.chance_prob;
    } else {
      const Index q = pair_offset[static_cast<size_t>(parent.infoset)] + node.incoming_action;
      m_qv.emplace_back(q, v, 1.0);
      cg.m_vi(v, tree.infoset(parent.infoset).owner - 1) = 1.0;
    }
  }

  Triplets m_hq;
  for (Index q = 0; q < num_pairs; ++q) m_hq.emplace_back(maps.pair_infoset[static_cast<size_t>(q)], q, 1.0);

  cg.g = CsrMatrix<double>::FromTriplets(num_nodes, num_nodes, std::move(g));
  cg.g_t = cg.g.Transpose();
  for (int l = 0; l < depth; ++l) {
    cg.levels.push_back(
        CsrMatrix<double>::FromTriplets(num_nodes, num_nodes, std::move(levels[static_cast<size_t>(l)])));
    if (cg.levels.back().nnz() == 0)
      throw std::logic_error("level graph " + std::to_string(l + 1) + " is empty");
    cg.levels_t.push_back(cg.levels.back().Transpose());
  }
  cg.m_qv = CsrMatrix<double>::FromTriplets(num_pairs, num_nodes, std::move(m_qv));
  cg.m_qv_t = cg.m_qv.Transpose();
  cg.m_hq = CsrMatrix<double>::FromTriplets(num_infosets, num_pairs, std::move(m_hq));
  cg.m_hq_t = cg.m_hq.Transpose();

  // Uniform start: 1 / (M_HQ^T (M_HQ 1)).
  const std::vector<double> ones(static_cast<size_t>(num_pairs), 1.0);
  const std::vector<double> actions_per_infoset = kernels::Spmv<double>(cg.m_hq, ones);
  const std::vector<double> actions_per_pair = kernels::Spmv<double>(cg.m_hq_t, actions_per_infoset);
  cg.sigma1.resize(static_cast<size_t>(num_pairs));
  for (size_t q = 0; q < cg.sigma1.size(); ++q) cg.sigma1[q] = 1.0 / actions_per_pair[q];

  cg.dims = GameDims{num_nodes, terminals, num_nodes - terminals, num_infosets,
                     num_pairs,  num_players, depth};
  if (stats) {
    stats->visits = visits;
    stats->seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return cg;
}

double Sparsity(const CsrMatrix<double>& m) {
  if (m.num_rows == 0 || m.num_cols == 0)
    throw DimensionError("sparsity of a " + std::to_string(m.num_rows) + "x" +
                         std::to_string(m.num_cols) + " matrix is undefined");
  return 1.0 - static_cast<double>(m.nnz()) /
                   (static_cast<double>(m.num_rows) * static_cast<double>(m.num_cols));
}

double MeanLevelSparsity(const CompiledGame& cg) {
  if (cg.levels.empty()) throw DimensionError("game has no level graphs");
  double total = 0.0;
  for (const auto& level : cg.levels) total += Sparsity(level);
  return total / static_cast<double>(cg.levels.size());
}

GameTree Decompile(const CompiledGame& cg) {
  GameBuilder b(cg.name, static_cast<int>(cg.dims.num_players));
  const Index n = cg.dims.num_nodes;
  for (NodeId v = 0; v < n; ++v) {
    const NodeId parent = cg.g_t.RowCols(v).empty() ? kNoNode : cg.g_t.RowCols(v)[0];
    std::string action;
    if (parent != kNoNode) {
      const auto pair = cg.m_qv_t.RowCols(v);
      if (pair.empty()) {
        const auto siblings = cg.g.RowCols(parent);
        action = "c" + std::to_string(std::find(siblings.begin(), siblings.end(), v) -
                                      siblings.begin());
      } else {
        action = cg.maps.pair_label[static_cast<size_t>(pair[0])];
      }
    }
    const auto children = cg.g.RowCols(v);
    NodeKind kind = NodeKind::kTerminal;
    if (!children.empty())
      kind = cg.m_qv_t.RowCols(children[0]).empty() ? NodeKind::kChance : NodeKind::kDecision;
    const int handle = b.AddNode(static_cast<int>(parent), kind, std::move(action));
    if (parent != kNoNode && cg.m_qv_t.RowCols(v).empty())
      b.SetChanceProbability(handle, cg.s_sigma0[static_cast<size_t>(v)]);
    if (kind == NodeKind::kTerminal) {
      const auto row = cg.u_term.Row(v);
      b.SetPayoffs(handle, std::vector<double>(row.begin(), row.end()));
    } else if (kind == NodeKind::kDecision) {
      const Index h = cg.maps.pair_infoset[static_cast<size_t>(cg.m_qv_t.RowCols(children[0])[0])];
      b.SetInfoset(handle, cg.maps.infoset_owner[static_cast<size_t>(h)],
                   cg.maps.infoset_label[static_cast<size_t>(h)]);
    }
  }
  return b.Build();
}

}  // namespace cfrmat
