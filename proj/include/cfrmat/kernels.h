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

// Array primitives used by the matrix-form CFR iteration.
//
// Every kernel writes a set of output elements that are independent of each
// other given the inputs, so rows may be processed in parallel. Reductions
// run in ascending column order within a row, which makes results
// bit-reproducible for a fixed precision. In/out arguments must not alias
// the read-only arguments.

#ifndef CFRMAT_KERNELS_H_
#define CFRMAT_KERNELS_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfrmat/csr.h"

namespace cfrmat {

class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace kernels {

// Optional instrumentation: counts writes per output row.
struct RowWriteCounter {
  std::vector<int> writes;
  explicit RowWriteCounter(Index rows) : writes(static_cast<size_t>(rows), 0) {}
  void Reset() { std::fill(writes.begin(), writes.end(), 0); }
};

inline void CheckSize(bool ok, const char* kernel, const std::string& detail) {
  if (!ok) throw DimensionError(std::string(kernel) + ": dimension mismatch (" + detail + ")");
}

template <typename Real>
void CheckFinite(std::span<const Real> x, const std::string& what) {
  for (size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      throw NumericalFault(what + " has non-finite entry at index " + std::to_string(i));
}

// y = A x
template <typename Real>
void Spmv(const CsrMatrix<Real>& a, std::span<const Real> x, std::span<Real> y) {
  CheckSize(static_cast<Index>(x.size()) == a.num_cols && static_cast<Index>(y.size()) == a.num_rows,
            "Spmv",
            std::to_string(a.num_rows) + "x" + std::to_string(a.num_cols) + " * " +
                std::to_string(x.size()) + " -> " + std::to_string(y.size()));
  for (Index r = 0; r < a.num_rows; ++r) {
    Real acc{0};
    const auto cols = a.RowCols(r);
    const auto vals = a.RowValues(r);
    for (size_t k = 0; k < cols.size(); ++k) acc += vals[k] * x[static_cast<size_t>(cols[k])];
    y[static_cast<size_t>(r)] = acc;
  }
}

template <typename Real>
std::vector<Real> Spmv(const CsrMatrix<Real>& a, std::span<const Real> x) {
  std::vector<Real> y(static_cast<size_t>(a.num_rows));
  Spmv<Real>(a, x, y);
  return y;
}

// Y = A X, column by column with Spmv semantics.
template <typename Real>
void Spmm(const CsrMatrix<Real>& a, const DenseMatrix<Real>& x, DenseMatrix<Real>& y) {
  CheckSize(x.num_rows == a.num_cols && y.num_rows == a.num_rows && y.num_cols == x.num_cols,
            "Spmm",
            std::to_string(a.num_rows) + "x" + std::to_string(a.num_cols) + " * " +
                std::to_string(x.num_rows) + "x" + std::to_string(x.num_cols));
  const Index width = x.num_cols;
  for (Index r = 0; r < a.num_rows; ++r) {
    auto out = y.Row(r);
    std::fill(out.begin(), out.end(), Real{0});
    const auto cols = a.RowCols(r);
    const auto vals = a.RowValues(r);
    for (size_t k = 0; k < cols.size(); ++k) {
      const auto in = x.Row(cols[k]);
      for (Index i = 0; i < width; ++i) out[static_cast<size_t>(i)] += vals[k] * in[static_cast<size_t>(i)];
    }
  }
}

template <typename Real>
DenseMatrix<Real> Spmm(const CsrMatrix<Real>& a, const DenseMatrix<Real>& x) {
  DenseMatrix<Real> y(a.num_rows, x.num_cols);
  Spmm(a, x, y);
  return y;
}

// One step of the bottom-up value sweep over level graph `level`:
//   U[v,:] += sum_{v'} level[v,v'] * s[v'] * U[v',:]
// for every parent row v of the level. Rows without children in this level
// are not touched. This is (L ⊙ S) U + U with the broadcast S = (s_{v'})
// applied on the fly.
template <typename Real>
void LevelDownAccumulate(const CsrMatrix<Real>& level, std::span<const Real> s,
                         DenseMatrix<Real>& u, RowWriteCounter* counter = nullptr) {
  CheckSize(level.num_rows == level.num_cols && static_cast<Index>(s.size()) == level.num_cols &&
                u.num_rows == level.num_rows,
            "LevelDownAccumulate",
            "level " + std::to_string(level.num_rows) + "x" + std::to_string(level.num_cols) +
                ", s " + std::to_string(s.size()) + ", U rows " + std::to_string(u.num_rows));
  const Index width = u.num_cols;
  const auto [begin, end] = level.NonemptyRowRange();
  for (Index v = begin; v < end; ++v) {
    const auto cols = level.RowCols(v);
    if (cols.empty()) continue;
    const auto vals = level.RowValues(v);
    auto out = u.Row(v);
    for (size_t k = 0; k < cols.size(); ++k) {
      const Real weight = vals[k] * s[static_cast<size_t>(cols[k])];
      const auto child = u.Row(cols[k]);
      for (Index i = 0; i < width; ++i)
        out[static_cast<size_t>(i)] += weight * child[static_cast<size_t>(i)];
    }
    if (counter) ++counter->writes[static_cast<size_t>(v)];
  }
}

// Scale rules for LevelUpScale. `CheckScale` realizes the matrix that keeps
// the acting player's column at 1 and scales every other column by s[v]
// (reach ignoring the player's own strategy); `HatScale` is its complement
// (reach through the player's own strategy only). Neither is materialized.
template <typename Real>
struct CheckScale {
  std::span<const Real> s;
  const DenseMatrix<Real>& player_mask;
  Real operator()(Index v, Index i) const {
    return player_mask(v, i) == Real{0} ? s[static_cast<size_t>(v)] : Real{1};
  }
};

template <typename Real>
struct HatScale {
  std::span<const Real> s;
  const DenseMatrix<Real>& player_mask;
  Real operator()(Index v, Index i) const {
    return player_mask(v, i) == Real{0} ? Real{1} : s[static_cast<size_t>(v)];
  }
};

// Plain reach: every column scaled by s[v].
template <typename Real>
struct UniformScale {
  std::span<const Real> s;
  Real operator()(Index v, Index) const { return s[static_cast<size_t>(v)]; }
};

template <typename Real>
struct ExplicitScale {
  const DenseMatrix<Real>& scale;
  Real operator()(Index v, Index i) const { return scale(v, i); }
};

// One step of the top-down reach sweep. `level_t` is the transpose of the
// level graph, so row v' lists the parent of depth-l node v'. For each such
// row:
//   Pi[v',:] = (sum_v level_t[v',v] * Pi[v,:]) ⊙ scale(v',:) + Pi[v',:]
// Each depth-l row is written exactly once; shallower rows are untouched.
template <typename Real, typename Scale>
void LevelUpScale(const CsrMatrix<Real>& level_t, const Scale& scale, DenseMatrix<Real>& pi,
                  RowWriteCounter* counter = nullptr) {
  CheckSize(level_t.num_rows == level_t.num_cols && pi.num_rows == level_t.num_rows,
            "LevelUpScale",
            "level " + std::to_string(level_t.num_rows) + "x" + std::to_string(level_t.num_cols) +
                ", Pi rows " + std::to_string(pi.num_rows));
  const Index width = pi.num_cols;
  const auto [begin, end] = level_t.NonemptyRowRange();
  for (Index v = begin; v < end; ++v) {
    const auto cols = level_t.RowCols(v);
    if (cols.empty()) continue;
    const auto vals = level_t.RowValues(v);
    auto out = pi.Row(v);
    for (Index i = 0; i < width; ++i) {
      Real acc{0};
      for (size_t k = 0; k < cols.size(); ++k) acc += vals[k] * pi(cols[k], i);
      out[static_cast<size_t>(i)] += acc * scale(v, i);
    }
    if (counter) ++counter->writes[static_cast<size_t>(v)];
  }
}

template <typename Real>
void LevelUpScale(const CsrMatrix<Real>& level_t, const DenseMatrix<Real>& scale,
                  DenseMatrix<Real>& pi, RowWriteCounter* counter = nullptr) {
  CheckSize(scale.num_rows == pi.num_rows && scale.num_cols == pi.num_cols, "LevelUpScale",
            "scale shape differs from Pi");
  LevelUpScale(level_t, ExplicitScale<Real>{scale}, pi, counter);
}

template <typename Real>
void Hadamard(std::span<const Real> x, std::span<const Real> y, std::span<Real> out) {
  CheckSize(x.size() == y.size() && x.size() == out.size(), "Hadamard",
            std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
}

template <typename Real>
void Relu(std::span<const Real> x, std::span<Real> out) {
  CheckSize(x.size() == out.size(), "Relu", std::to_string(x.size()));
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] > Real{0} ? x[i] : Real{0};
}

// x / y elementwise, exactly 0 where y == 0.
template <typename Real>
void SafeDivide(std::span<const Real> x, std::span<const Real> y, std::span<Real> out) {
  CheckSize(x.size() == y.size() && x.size() == out.size(), "SafeDivide",
            std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  for (size_t i = 0; i < x.size(); ++i) out[i] = y[i] == Real{0} ? Real{0} : x[i] / y[i];
}

// out[v] = sum_i mask[v,i] * X[v,i]. With at most one 1 per mask row this
// picks the acting player's column.
template <typename Real>
void SelectPlayerColumn(const DenseMatrix<Real>& mask, const DenseMatrix<Real>& x,
                        std::span<Real> out) {
  CheckSize(mask.num_rows == x.num_rows && mask.num_cols == x.num_cols &&
                static_cast<Index>(out.size()) == x.num_rows,
            "SelectPlayerColumn",
            std::to_string(mask.num_rows) + "x" + std::to_string(mask.num_cols) + " vs " +
                std::to_string(x.num_rows) + "x" + std::to_string(x.num_cols));
  for (Index v = 0; v < x.num_rows; ++v) {
    Real acc{0};
    const auto m = mask.Row(v);
    const auto row = x.Row(v);
    for (Index i = 0; i < x.num_cols; ++i) acc += m[static_cast<size_t>(i)] * row[static_cast<size_t>(i)];
    out[static_cast<size_t>(v)] = acc;
  }
}

template <typename Real>
std::vector<Real> Hadamard(std::span<const Real> x, std::span<const Real> y) {
  std::vector<Real> out(x.size());
  Hadamard<Real>(x, y, out);
  return out;
}

template <typename Real>
std::vector<Real> Relu(std::span<const Real> x) {
  std::vector<Real> out(x.size());
  Relu<Real>(x, out);
  return out;
}

template <typename Real>
std::vector<Real> SafeDivide(std::span<const Real> x, std::span<const Real> y) {
  std::vector<Real> out(x.size());
  SafeDivide<Real>(x, y, out);
  return out;
}

template <typename Real>
std::vector<Real> SelectPlayerColumn(const DenseMatrix<Real>& mask, const DenseMatrix<Real>& x) {
  std::vector<Real> out(static_cast<size_t>(x.num_rows));
  SelectPlayerColumn(mask, x, std::span<Real>(out));
  return out;
}

}  // namespace kernels
}  // namespace cfrmat

#endif  // CFRMAT_KERNELS_H_
