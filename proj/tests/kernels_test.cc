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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfrmat/builtin_games.h"
#include "cfrmat/compiler.h"
#include "cfrmat/kernels.h"
#include "test_oracles.h"

namespace cfrmat {
namespace {

using testing::DenseMatMul;
using testing::DenseMatVec;
using testing::MaxAbsDiff;
using testing::RandomCsr;
using testing::RandomVector;

constexpr int kCases = 100;
constexpr double kF64Tolerance = 1e-13;
constexpr double kF32RelativeTolerance = 1e-5;

DenseMatrix<double> RandomDense(SplitMix64& rng, Index rows, Index cols) {
  DenseMatrix<double> m(rows, cols);
  m.data = RandomVector(rng, static_cast<size_t>(rows * cols));
  return m;
}

TEST_CASE("csr construction, transpose and row ranges") {
  const auto m = CsrMatrix<double>::FromTriplets(3, 4, {{2, 1, 1.0}, {0, 3, 2.0}, {2, 1, 0.5}});
  CHECK(m.WellFormed());
  CHECK(m.nnz() == 2);
  CHECK(m.ToDense() == std::vector<double>{0, 0, 0, 2, 0, 0, 0, 0, 0, 1.5, 0, 0});
  CHECK(m.Transpose().Transpose() == m);
  const auto range = m.NonemptyRowRange();
  CHECK(range.first == 0);
  CHECK(range.second == 3);
  const auto only_middle = CsrMatrix<double>::FromTriplets(5, 5, {{2, 0, 1.0}, {3, 4, 1.0}});
  CHECK(only_middle.NonemptyRowRange() == std::pair<Index, Index>{2, 4});
  CHECK(CsrMatrix<double>(4, 4).NonemptyRowRange() == std::pair<Index, Index>{0, 0});
  CHECK_THROWS_AS(CsrMatrix<double>::FromTriplets(2, 2, {{2, 0, 1.0}}), DimensionError);
}

TEST_CASE("spmv and spmm agree with dense products") {
  SplitMix64 rng(7);
  for (int c = 0; c < kCases; ++c) {
    const Index rows = rng.NextInt(1, 12);
    const Index cols = rng.NextInt(1, 12);
    const auto a = RandomCsr(rng, rows, cols, 0.3);
    const auto x = RandomVector(rng, static_cast<size_t>(cols));
    const auto dense = a.ToDense();
    CHECK(MaxAbsDiff(kernels::Spmv<double>(a, x), DenseMatVec(dense, rows, cols, x)) <= kF64Tolerance);

    const Index width = rng.NextInt(1, 4);
    const auto b = RandomDense(rng, cols, width);
    const auto y = kernels::Spmm(a, b);
    CHECK(MaxAbsDiff(y.data, DenseMatMul(dense, rows, cols, b.data, width)) <= kF64Tolerance);

    // Single precision, relative to the magnitude of the exact result.
    const auto af = a.Cast<float>();
    const std::vector<float> xf(x.begin(), x.end());
    const auto yf = kernels::Spmv<float>(af, xf);
    const auto exact = DenseMatVec(dense, rows, cols, std::vector<double>(xf.begin(), xf.end()));
    for (size_t i = 0; i < yf.size(); ++i) {
      double scale = 0.0;
      for (Index k = 0; k < cols; ++k)
        scale += std::abs(dense[i * static_cast<size_t>(cols) + static_cast<size_t>(k)] * x[static_cast<size_t>(k)]);
      CHECK(std::abs(yf[i] - exact[i]) <= kF32RelativeTolerance * std::max(scale, 1.0));
    }
  }
}

TEST_CASE("kernels reject mismatched dimensions") {
  const CsrMatrix<double> a(3, 4);
  std::vector<double> x(3), y(3);
  CHECK_THROWS_AS(kernels::Spmv<double>(a, x, y), DimensionError);
  DenseMatrix<double> u(2, 2);
  CHECK_THROWS_AS(kernels::LevelDownAccumulate<double>(CsrMatrix<double>(3, 3), x, u), DimensionError);
  CHECK_THROWS_AS(kernels::Hadamard<double>(x, std::vector<double>(2)), DimensionError);
  CHECK_THROWS_AS(kernels::SelectPlayerColumn(DenseMatrix<double>(3, 2), DenseMatrix<double>(3, 3)),
                  DimensionError);
}

// Random square "level": parents in the first half of the rows, children in
// the second half, at most one parent per child, as in a tree level.
CsrMatrix<double> RandomLevel(SplitMix64& rng, Index n) {
  std::vector<std::tuple<Index, Index, double>> triplets;
  const Index half = n / 2;
  for (Index c = half; c < n; ++c)
    if (rng.NextDouble() < 0.7) triplets.emplace_back(rng.NextInt(0, static_cast<int>(half) - 1), c, 1.0);
  return CsrMatrix<double>::FromTriplets(n, n, std::move(triplets));
}

TEST_CASE("level kernels agree with dense loops") {
  SplitMix64 rng(11);
  for (int c = 0; c < kCases; ++c) {
    const Index n = rng.NextInt(2, 15);
    const Index width = rng.NextInt(1, 4);
    const auto level = RandomLevel(rng, n);
    const auto s = RandomVector(rng, static_cast<size_t>(n), 0.0, 1.0);
    const auto dense = level.ToDense();

    // Down: U += (L .* s_broadcast) U.
    auto u = RandomDense(rng, n, width);
    std::vector<double> expected = u.data;
    for (Index v = 0; v < n; ++v)
      for (Index w = 0; w < n; ++w)
        for (Index i = 0; i < width; ++i)
          expected[static_cast<size_t>(v * width + i)] +=
              dense[static_cast<size_t>(v * n + w)] * s[static_cast<size_t>(w)] * u(w, i);
    kernels::RowWriteCounter down_counter(n);
    kernels::LevelDownAccumulate<double>(level, s, u, &down_counter);
    CHECK(MaxAbsDiff(u.data, expected) <= kF64Tolerance);
    for (Index v = 0; v < n; ++v)
      CHECK(down_counter.writes[static_cast<size_t>(v)] == (level.RowCols(v).empty() ? 0 : 1));

    // Up: Pi += (L^T Pi) .* scale.
    const auto level_t = level.Transpose();
    auto pi = RandomDense(rng, n, width);
    const auto scale = RandomDense(rng, n, width);
    expected = pi.data;
    for (Index v = 0; v < n; ++v)
      for (Index i = 0; i < width; ++i) {
        double acc = 0.0;
        for (Index w = 0; w < n; ++w) acc += dense[static_cast<size_t>(w * n + v)] * pi(w, i);
        expected[static_cast<size_t>(v * width + i)] += acc * scale(v, i);
      }
    kernels::RowWriteCounter up_counter(n);
    kernels::LevelUpScale(level_t, scale, pi, &up_counter);
    CHECK(MaxAbsDiff(pi.data, expected) <= kF64Tolerance);
    for (Index v = 0; v < n; ++v)
      CHECK(up_counter.writes[static_cast<size_t>(v)] == (level_t.RowCols(v).empty() ? 0 : 1));
  }
}

TEST_CASE("check and hat scales") {
  DenseMatrix<double> mask(3, 2);
  mask(1, 0) = 1.0;
  mask(2, 1) = 1.0;
  const std::vector<double> s{0.0, 0.25, 0.5};
  const kernels::CheckScale<double> check{s, mask};
  const kernels::HatScale<double> hat{s, mask};
  CHECK(check(1, 0) == 1.0);
  CHECK(check(1, 1) == 0.25);
  CHECK(hat(1, 0) == 0.25);
  CHECK(hat(1, 1) == 1.0);
  CHECK(check(0, 0) == 0.0);
  CHECK(hat(0, 0) == 1.0);
}

TEST_CASE("elementwise kernels agree with scalar loops exactly") {
  SplitMix64 rng(13);
  for (int c = 0; c < kCases; ++c) {
    const size_t n = static_cast<size_t>(rng.NextInt(1, 20));
    const auto x = RandomVector(rng, n);
    auto y = RandomVector(rng, n);
    if (n > 1) y[0] = 0.0;
    const auto h = kernels::Hadamard<double>(x, y);
    const auto r = kernels::Relu<double>(x);
    const auto d = kernels::SafeDivide<double>(x, y);
    for (size_t i = 0; i < n; ++i) {
      CHECK(h[i] == x[i] * y[i]);
      CHECK(r[i] == (x[i] > 0.0 ? x[i] : 0.0));
      CHECK(d[i] == (y[i] == 0.0 ? 0.0 : x[i] / y[i]));
    }
  }
}

TEST_CASE("select player column picks the masked entry") {
  SplitMix64 rng(17);
  for (int c = 0; c < kCases; ++c) {
    const Index n = rng.NextInt(1, 10);
    const Index p = rng.NextInt(1, 4);
    DenseMatrix<double> mask(n, p);
    std::vector<double> expected(static_cast<size_t>(n), 0.0);
    const auto x = RandomDense(rng, n, p);
    for (Index v = 0; v < n; ++v) {
      const int pick = rng.NextInt(-1, static_cast<int>(p) - 1);
      if (pick >= 0) {
        mask(v, pick) = 1.0;
        expected[static_cast<size_t>(v)] = x(v, pick);
      }
    }
    CHECK(kernels::SelectPlayerColumn(mask, x) == expected);
  }
}

TEST_CASE("transposed adjacency gathers parent payoffs on the signal game") {
  const GameTree tree = SignalGame();
  const CompiledGame cg = Compile(tree);
  const auto gathered = kernels::Spmm(cg.g_t, cg.u_term);
  for (NodeId v = 0; v < tree.num_nodes(); ++v)
    for (Index i = 0; i < cg.dims.num_players; ++i) {
      const NodeId parent = tree.node(v).parent;
      CHECK(gathered(v, i) == (parent == kNoNode ? 0.0 : cg.u_term(parent, i)));
    }
}

TEST_CASE("finite check") {
  std::vector<double> x{1.0, std::nan("")};
  CHECK_THROWS_AS(kernels::CheckFinite<double>(x, "x"), NumericalFault);
  x[1] = 2.0;
  CHECK_NOTHROW(kernels::CheckFinite<double>(x, "x"));
}

}  // namespace
}  // namespace cfrmat
