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

// Vanilla CFR as a fixed sequence of sparse/dense array operations over a
// CompiledGame. One iteration is:
//
//   T += 1
//   s        = M_QV^T sigma + s_sigma0                  (ExpandStrategy)
//   U        = bottom-up level sweep from U_term         (BackwardValues)
//   Pi_check = top-down level sweep, opponents' reach    (ForwardReach CHECK)
//   Pi_hat   = top-down level sweep, own reach           (ForwardReach HAT)
//   pi_*     = acting player's column of Pi_*            (ReachVectors)
//   avg_sigma, reach_sum updated incrementally           (UpdateAverageStrategy)
//   r_inst   = M_QV (pi_check .* (U - G^T U)|acting)     (InstantaneousRegrets)
//   avg_regret, sigma by regret matching                 (UpdateRegretsAndStrategy)
//
// All players update simultaneously. The solver is templated on the working
// precision; constants are narrowed once when the SolverGame is built.

#ifndef CFRMAT_SOLVER_H_
#define CFRMAT_SOLVER_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfrmat/compiler.h"
#include "cfrmat/csr.h"
#include "cfrmat/kernels.h"

namespace cfrmat {

enum class Precision { kF64, kF32 };

std::string PrecisionName(Precision p);

// The constants of a CompiledGame in working precision.
template <typename Real>
struct SolverGame {
  GameDims dims;
  CsrMatrix<Real> g_t;
  std::vector<CsrMatrix<Real>> levels;
  std::vector<CsrMatrix<Real>> levels_t;
  CsrMatrix<Real> m_qv;
  CsrMatrix<Real> m_qv_t;
  CsrMatrix<Real> m_hq;
  CsrMatrix<Real> m_hq_t;
  DenseMatrix<Real> m_vi;
  std::vector<Real> s_sigma0;
  DenseMatrix<Real> u_term;
  std::vector<Real> sigma1;

  explicit SolverGame(const CompiledGame& cg);
};

template <typename Real>
struct SolverState {
  std::vector<Real> sigma;       // current strategy, per Q+ row
  std::vector<Real> avg_sigma;   // reach-weighted average strategy, per Q+ row
  std::vector<Real> avg_regret;  // average counterfactual regret, per Q+ row
  std::vector<Real> reach_sum;   // running sum of own reach, per H+ row
  Index iteration = 0;           // T, number of completed iterations
};

// Work arrays for one solve. Allocated once and overwritten each iteration.
template <typename Real>
struct SweepBuffers {
  std::vector<Real> s;         // |V| probability of the edge into each node
  DenseMatrix<Real> u;         // |V|x|I+| expected payoffs
  DenseMatrix<Real> pi_check;  // |V|x|I+| reach without the column player
  DenseMatrix<Real> pi_hat;    // |V|x|I+| reach of the column player only
  std::vector<Real> pi_check_v;  // |V| acting player's entry of pi_check
  std::vector<Real> pi_hat_v;    // |V| acting player's entry of pi_hat
  std::vector<Real> r_inst;      // |Q+| instantaneous regrets
  std::vector<Real> pi_bar;      // |H+| own reach of each infoset

  // Scratch.
  DenseMatrix<Real> parent_u;       // |V|x|I+| G^T U
  std::vector<Real> node_scratch;   // |V|
  std::vector<Real> pair_scratch;   // |Q+|
  std::vector<Real> pair_scratch2;  // |Q+|
  std::vector<Real> infoset_scratch;  // |H+|

  explicit SweepBuffers(const GameDims& dims);
};

// Per-row write counts of the last sweeps, for instrumentation.
struct SweepCounters {
  kernels::RowWriteCounter backward;
  kernels::RowWriteCounter forward_check;
  kernels::RowWriteCounter forward_hat;
  explicit SweepCounters(Index num_nodes)
      : backward(num_nodes), forward_check(num_nodes), forward_hat(num_nodes) {}
};

struct MetricsRecord {
  Index iteration = 0;
  double wall_ms = 0.0;
  std::optional<double> exploitability;
  std::optional<double> nash_conv;
};

enum class ReachVariant { kCheck, kHat };

template <typename Real>
SolverState<Real> InitState(const SolverGame<Real>& game);

template <typename Real>
void ExpandStrategy(const SolverGame<Real>& game, std::span<const Real> sigma, std::span<Real> s);

// Expects `u` preloaded with U_term; sweeps l = D..1.
template <typename Real>
void BackwardValues(const SolverGame<Real>& game, std::span<const Real> s, DenseMatrix<Real>& u,
                    kernels::RowWriteCounter* counter = nullptr);

// Resets `pi` to the root indicator and sweeps l = 1..D.
template <typename Real>
void ForwardReach(const SolverGame<Real>& game, std::span<const Real> s, DenseMatrix<Real>& pi,
                  ReachVariant variant, kernels::RowWriteCounter* counter = nullptr);

template <typename Real>
void ReachVectors(const SolverGame<Real>& game, SweepBuffers<Real>& buffers);

// Expects state.iteration already incremented. Fills buffers.pi_bar.
template <typename Real>
void UpdateAverageStrategy(const SolverGame<Real>& game, SolverState<Real>& state,
                           SweepBuffers<Real>& buffers);

// Fills buffers.r_inst from buffers.pi_check_v and buffers.u.
template <typename Real>
void InstantaneousRegrets(const SolverGame<Real>& game, SweepBuffers<Real>& buffers);

// Expects state.iteration already incremented.
template <typename Real>
void UpdateRegretsAndStrategy(const SolverGame<Real>& game, SolverState<Real>& state,
                              SweepBuffers<Real>& buffers);

// One full iteration. Throws NumericalFault naming the iteration when a
// non-finite value appears; the state is then unspecified.
template <typename Real>
MetricsRecord Iterate(const SolverGame<Real>& game, SolverState<Real>& state,
                      SweepBuffers<Real>& buffers, SweepCounters* counters = nullptr);

// Debug sweep: sum over terminals of the product of s along the path to the
// terminal. Equals 1 for any normalized strategy.
template <typename Real>
double FullReachMass(const SolverGame<Real>& game, std::span<const Real> s);

struct StrategyRecord {
  PlayerId player = 0;
  std::string infoset;
  std::string action;
  double probability = 0.0;
};

// Average strategy labeled through the index maps, in Q+ row order. Throws
// std::logic_error before the first iteration.
template <typename Real>
std::vector<StrategyRecord> AverageStrategy(const CompiledGame& cg, const SolverState<Real>& state);

// Convenience driver: runs `iterations` iterations in working precision Real
// and returns the state widened to double.
struct SolveResult {
  std::vector<double> sigma;
  std::vector<double> avg_sigma;
  Index iterations = 0;
  double total_ms = 0.0;
};
SolveResult Solve(const CompiledGame& cg, Index iterations, Precision precision);

}  // namespace cfrmat

#endif  // CFRMAT_SOLVER_H_
