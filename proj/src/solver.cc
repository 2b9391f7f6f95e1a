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

#include "cfrmat/solver.h"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace cfrmat {
namespace {

template <typename Real>
std::vector<Real> Narrow(const std::vector<double>& x) {
  return std::vector<Real>(x.begin(), x.end());
}

template <typename Real>
std::span<const Real> Const(const std::vector<Real>& x) {
  return std::span<const Real>(x);
}

}  // namespace

std::string PrecisionName(Precision p) { return p == Precision::kF64 ? "f64" : "f32"; }

template <typename Real>
SolverGame<Real>::SolverGame(const CompiledGame& cg)
    : dims(cg.dims),
      g_t(cg.g_t.Cast<Real>()),
      m_qv(cg.m_qv.Cast<Real>()),
      m_qv_t(cg.m_qv_t.Cast<Real>()),
      m_hq(cg.m_hq.Cast<Real>()),
      m_hq_t(cg.m_hq_t.Cast<Real>()),
      m_vi(cg.m_vi.Cast<Real>()),
      s_sigma0(Narrow<Real>(cg.s_sigma0)),
      u_term(cg.u_term.Cast<Real>()),
      sigma1(Narrow<Real>(cg.sigma1)) {
  for (const auto& l : cg.levels) levels.push_back(l.Cast<Real>());
  for (const auto& l : cg.levels_t) levels_t.push_back(l.Cast<Real>());
}

template <typename Real>
SweepBuffers<Real>::SweepBuffers(const GameDims& d)
    : s(static_cast<size_t>(d.num_nodes)),
      u(d.num_nodes, d.num_players),
      pi_check(d.num_nodes, d.num_players),
      pi_hat(d.num_nodes, d.num_players),
      pi_check_v(static_cast<size_t>(d.num_nodes)),
      pi_hat_v(static_cast<size_t>(d.num_nodes)),
      r_inst(static_cast<size_t>(d.num_pairs)),
      pi_bar(static_cast<size_t>(d.num_infosets)),
      parent_u(d.num_nodes, d.num_players),
      node_scratch(static_cast<size_t>(d.num_nodes)),
      pair_scratch(static_cast<size_t>(d.num_pairs)),
      pair_scratch2(static_cast<size_t>(d.num_pairs)),
      infoset_scratch(static_cast<size_t>(d.num_infosets)) {}

template <typename Real>
SolverState<Real> InitState(const SolverGame<Real>& game) {
  SolverState<Real> state;
  state.sigma = game.sigma1;
  state.avg_sigma = game.sigma1;
  state.avg_regret.assign(game.sigma1.size(), Real{0});
  state.reach_sum.assign(static_cast<size_t>(game.dims.num_infosets), Real{0});
  state.iteration = 0;
  return state;
}

template <typename Real>
void ExpandStrategy(const SolverGame<Real>& game, std::span<const Real> sigma, std::span<Real> s) {
  kernels::Spmv<Real>(game.m_qv_t, sigma, s);
  for (size_t v = 0; v < s.size(); ++v) s[v] += game.s_sigma0[v];
}

template <typename Real>
void BackwardValues(const SolverGame<Real>& game, std::span<const Real> s, DenseMatrix<Real>& u,
                    kernels::RowWriteCounter* counter) {
  for (auto l = game.levels.size(); l-- > 0;)
    kernels::LevelDownAccumulate(game.levels[l], s, u, counter);
}

template <typename Real>
void ForwardReach(const SolverGame<Real>& game, std::span<const Real> s, DenseMatrix<Real>& pi,
                  ReachVariant variant, kernels::RowWriteCounter* counter) {
  std::fill(pi.data.begin(), pi.data.end(), Real{0});
  if (pi.num_rows > 0) {
    auto root = pi.Row(0);
    std::fill(root.begin(), root.end(), Real{1});
  }
  for (const auto& level_t : game.levels_t) {
    if (variant == ReachVariant::kCheck)
      kernels::LevelUpScale(level_t, kernels::CheckScale<Real>{s, game.m_vi}, pi, counter);
    else
      kernels::LevelUpScale(level_t, kernels::HatScale<Real>{s, game.m_vi}, pi, counter);
  }
}

template <typename Real>
void ReachVectors(const SolverGame<Real>& game, SweepBuffers<Real>& b) {
  kernels::SelectPlayerColumn(game.m_vi, b.pi_check, std::span<Real>(b.pi_check_v));
  kernels::SelectPlayerColumn(game.m_vi, b.pi_hat, std::span<Real>(b.pi_hat_v));
}

template <typename Real>
void UpdateAverageStrategy(const SolverGame<Real>& game, SolverState<Real>& state,
                           SweepBuffers<Real>& b) {
  // pi_bar = M_HQ (M_QV pi_hat): own reach of each infoset.
  kernels::Spmv<Real>(game.m_qv, Const(b.pi_hat_v), b.pair_scratch);
  kernels::Spmv<Real>(game.m_hq, Const(b.pair_scratch), b.pi_bar);
  for (size_t h = 0; h < b.pi_bar.size(); ++h) state.reach_sum[h] += b.pi_bar[h];
  // avg += (M_HQ^T (pi_bar / reach_sum)) .* (sigma - avg)
  kernels::SafeDivide<Real>(b.pi_bar, state.reach_sum, b.infoset_scratch);
  kernels::Spmv<Real>(game.m_hq_t, Const(b.infoset_scratch), b.pair_scratch);
  for (size_t q = 0; q < state.avg_sigma.size(); ++q)
    state.avg_sigma[q] += b.pair_scratch[q] * (state.sigma[q] - state.avg_sigma[q]);
}

template <typename Real>
void InstantaneousRegrets(const SolverGame<Real>& game, SweepBuffers<Real>& b) {
  // parent_u = G^T U, then the acting player's entry of U - G^T U.
  kernels::Spmm(game.g_t, b.u, b.parent_u);
  for (size_t k = 0; k < b.parent_u.data.size(); ++k)
    b.parent_u.data[k] = b.u.data[k] - b.parent_u.data[k];
  kernels::SelectPlayerColumn(game.m_vi, b.parent_u, std::span<Real>(b.node_scratch));
  kernels::Hadamard<Real>(b.pi_check_v, b.node_scratch, b.node_scratch);
  kernels::Spmv<Real>(game.m_qv, Const(b.node_scratch), b.r_inst);
}

template <typename Real>
void UpdateRegretsAndStrategy(const SolverGame<Real>& game, SolverState<Real>& state,
                              SweepBuffers<Real>& b) {
  const Real t = static_cast<Real>(state.iteration);
  for (size_t q = 0; q < state.avg_regret.size(); ++q)
    state.avg_regret[q] += (b.r_inst[q] - state.avg_regret[q]) / t;
  // Regret matching: positive regrets normalized per infoset, uniform when
  // an infoset has no positive regret.
  auto& r_plus = b.pair_scratch;
  auto& denom = b.pair_scratch2;
  kernels::Relu<Real>(state.avg_regret, r_plus);
  kernels::Spmv<Real>(game.m_hq, Const(r_plus), b.infoset_scratch);
  kernels::Spmv<Real>(game.m_hq_t, Const(b.infoset_scratch), denom);
  for (size_t q = 0; q < state.sigma.size(); ++q)
    state.sigma[q] = denom[q] > Real{0} ? r_plus[q] / denom[q] : game.sigma1[q];
}

template <typename Real>
MetricsRecord Iterate(const SolverGame<Real>& game, SolverState<Real>& state,
                      SweepBuffers<Real>& b, SweepCounters* counters) {
  const auto start = std::chrono::steady_clock::now();
  const Index t = ++state.iteration;
  auto check = [t](std::span<const Real> x, const char* what) {
    for (size_t i = 0; i < x.size(); ++i)
      if (!std::isfinite(x[i]))
        throw NumericalFault("non-finite value in " + std::string(what) + " at entry " +
                             std::to_string(i) + " during iteration " + std::to_string(t));
  };
  if (counters) {
    counters->backward.Reset();
    counters->forward_check.Reset();
    counters->forward_hat.Reset();
  }

  ExpandStrategy<Real>(game, state.sigma, b.s);
  check(b.s, "s");
  std::copy(game.u_term.data.begin(), game.u_term.data.end(), b.u.data.begin());
  BackwardValues<Real>(game, b.s, b.u, counters ? &counters->backward : nullptr);
  check(b.u.data, "U");
  ForwardReach<Real>(game, b.s, b.pi_check, ReachVariant::kCheck,
                     counters ? &counters->forward_check : nullptr);
  ForwardReach<Real>(game, b.s, b.pi_hat, ReachVariant::kHat,
                     counters ? &counters->forward_hat : nullptr);
  check(b.pi_check.data, "Pi_check");
  check(b.pi_hat.data, "Pi_hat");
  ReachVectors(game, b);
  UpdateAverageStrategy(game, state, b);
  check(state.avg_sigma, "avg_sigma");
  InstantaneousRegrets(game, b);
  check(b.r_inst, "r_inst");
  UpdateRegretsAndStrategy(game, state, b);
  check(state.avg_regret, "avg_regret");
  check(state.sigma, "sigma");

  MetricsRecord record;
  record.iteration = t;
  record.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return record;
}

template <typename Real>
double FullReachMass(const SolverGame<Real>& game, std::span<const Real> s) {
  DenseMatrix<Real> pi(game.dims.num_nodes, 1);
  if (pi.num_rows > 0) pi(0, 0) = Real{1};
  for (const auto& level_t : game.levels_t)
    kernels::LevelUpScale(level_t, kernels::UniformScale<Real>{s}, pi);
  double mass = 0.0;
  // A node is terminal iff it has no child in any level graph.
  std::vector<char> has_child(static_cast<size_t>(pi.num_rows), 0);
  for (const auto& level : game.levels) {
    const auto [begin, end] = level.NonemptyRowRange();
    for (Index v = begin; v < end; ++v)
      if (!level.RowCols(v).empty()) has_child[static_cast<size_t>(v)] = 1;
  }
  for (Index v = 0; v < pi.num_rows; ++v)
    if (!has_child[static_cast<size_t>(v)]) mass += static_cast<double>(pi(v, 0));
  return mass;
}

template <typename Real>
std::vector<StrategyRecord> AverageStrategy(const CompiledGame& cg, const SolverState<Real>& state) {
  if (state.iteration < 1)
    throw std::logic_error("average strategy is undefined before the first iteration");
  const IndexMaps& m = cg.maps;
  std::vector<StrategyRecord> out;
  out.reserve(m.pair_infoset.size());
  for (size_t q = 0; q < m.pair_infoset.size(); ++q) {
    const auto h = static_cast<size_t>(m.pair_infoset[q]);
    out.push_back(StrategyRecord{m.infoset_owner[h], m.infoset_label[h], m.pair_label[q],
                                 static_cast<double>(state.avg_sigma[q])});
  }
  return out;
}

namespace {

template <typename Real>
SolveResult SolveIn(const CompiledGame& cg, Index iterations) {
  const SolverGame<Real> game(cg);
  SolverState<Real> state = InitState(game);
  SweepBuffers<Real> buffers(game.dims);
  SolveResult result;
  for (Index t = 0; t < iterations; ++t) result.total_ms += Iterate(game, state, buffers).wall_ms;
  result.iterations = state.iteration;
  result.sigma.assign(state.sigma.begin(), state.sigma.end());
  result.avg_sigma.assign(state.avg_sigma.begin(), state.avg_sigma.end());
  return result;
}

}  // namespace

SolveResult Solve(const CompiledGame& cg, Index iterations, Precision precision) {
  return precision == Precision::kF64 ? SolveIn<double>(cg, iterations)
                                      : SolveIn<float>(cg, iterations);
}

#define CFRMAT_INSTANTIATE_SOLVER(Real)                                                         \
  template struct SolverGame<Real>;                                                             \
  template struct SweepBuffers<Real>;                                                           \
  template SolverState<Real> InitState(const SolverGame<Real>&);                                \
  template void ExpandStrategy(const SolverGame<Real>&, std::span<const Real>, std::span<Real>); \
  template void BackwardValues(const SolverGame<Real>&, std::span<const Real>,                  \
                               DenseMatrix<Real>&, kernels::RowWriteCounter*);                  \
  template void ForwardReach(const SolverGame<Real>&, std::span<const Real>,                    \
                             DenseMatrix<Real>&, ReachVariant, kernels::RowWriteCounter*);      \
  template void ReachVectors(const SolverGame<Real>&, SweepBuffers<Real>&);                     \
  template void UpdateAverageStrategy(const SolverGame<Real>&, SolverState<Real>&,              \
                                      SweepBuffers<Real>&);                                     \
  template void InstantaneousRegrets(const SolverGame<Real>&, SweepBuffers<Real>&);             \
  template void UpdateRegretsAndStrategy(const SolverGame<Real>&, SolverState<Real>&,           \
                                         SweepBuffers<Real>&);                                  \
  template MetricsRecord Iterate(const SolverGame<Real>&, SolverState<Real>&,                   \
                                 SweepBuffers<Real>&, SweepCounters*);                          \
  template double FullReachMass(const SolverGame<Real>&, std::span<const Real>);                \
  template std::vector<StrategyRecord> AverageStrategy(const CompiledGame&,                     \
                                                       const SolverState<Real>&);

CFRMAT_INSTANTIATE_SOLVER(double)
CFRMAT_INSTANTIATE_SOLVER(float)

#undef CFRMAT_INSTANTIATE_SOLVER

}  // namespace cfrmat
