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

#ifndef CFRMAT_CSR_H_
#define CFRMAT_CSR_H_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace cfrmat {

using Index = std::int64_t;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Compressed sparse row matrix. Column indices are strictly increasing
// within each row.
template <typename Real>
struct CsrMatrix {
  Index num_rows = 0;
  Index num_cols = 0;
  std::vector<Index> row_ptr{0};
  std::vector<Index> col_idx;
  std::vector<Real> values;

  CsrMatrix() = default;
  CsrMatrix(Index rows, Index cols)
      : num_rows(rows), num_cols(cols), row_ptr(static_cast<size_t>(rows) + 1, 0) {}

  Index nnz() const { return static_cast<Index>(col_idx.size()); }

  std::span<const Index> RowCols(Index r) const {
    return {col_idx.data() + row_ptr[static_cast<size_t>(r)],
            static_cast<size_t>(row_ptr[static_cast<size_t>(r) + 1] -
                                row_ptr[static_cast<size_t>(r)])};
  }
  std::span<const Real> RowValues(Index r) const {
    return {values.data() + row_ptr[static_cast<size_t>(r)],
            static_cast<size_t>(row_ptr[static_cast<size_t>(r) + 1] -
                                row_ptr[static_cast<size_t>(r)])};
  }

  // Half-open range of rows that may hold nonzeros, found by bisecting
  // row_ptr. Lets level kernels skip the empty rows of a level graph.
  std::pair<Index, Index> NonemptyRowRange() const {
    if (nnz() == 0) return {0, 0};
    const auto first = std::upper_bound(row_ptr.begin(), row_ptr.end(), Index{0}) -
                       row_ptr.begin() - 1;
    const auto last = std::lower_bound(row_ptr.begin(), row_ptr.end(), nnz()) -
                      row_ptr.begin();
    return {first, last};
  }

  // Structural checks: row_ptr shape, bounds, sorted unique columns.
  bool WellFormed() const {
    if (num_rows < 0 || num_cols < 0) return false;
    if (row_ptr.size() != static_cast<size_t>(num_rows) + 1) return false;
    if (row_ptr.front() != 0 || row_ptr.back() != nnz()) return false;
    if (values.size() != col_idx.size()) return false;
    for (Index r = 0; r < num_rows; ++r) {
      if (row_ptr[static_cast<size_t>(r) + 1] < row_ptr[static_cast<size_t>(r)]) return false;
      auto cols = RowCols(r);
      for (size_t k = 0; k < cols.size(); ++k) {
        if (cols[k] < 0 || cols[k] >= num_cols) return false;
        if (k > 0 && cols[k] <= cols[k - 1]) return false;
      }
    }
    return true;
  }

  // Builds from (row, col, value) triplets. Duplicates are summed.
  static CsrMatrix FromTriplets(Index rows, Index cols,
                                std::vector<std::tuple<Index, Index, Real>> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    CsrMatrix m(rows, cols);
    Index prev_r = -1;
    Index prev_c = -1;
    for (const auto& [r, c, v] : triplets) {
      if (r < 0 || r >= rows || c < 0 || c >= cols)
        throw DimensionError("triplet (" + std::to_string(r) + "," + std::to_string(c) +
                             ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
      if (r == prev_r && c == prev_c) {
        m.values.back() += v;
        continue;
      }
      m.col_idx.push_back(c);
      m.values.push_back(v);
      ++m.row_ptr[static_cast<size_t>(r) + 1];
      prev_r = r;
      prev_c = c;
    }
    std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
    return m;
  }

  // Dense row-major copy, for tests and small diagnostics.
  std::vector<Real> ToDense() const {
    std::vector<Real> dense(static_cast<size_t>(num_rows * num_cols), Real{0});
    for (Index r = 0; r < num_rows; ++r) {
      auto cols = RowCols(r);
      auto vals = RowValues(r);
      for (size_t k = 0; k < cols.size(); ++k)
        dense[static_cast<size_t>(r * num_cols + cols[k])] = vals[k];
    }
    return dense;
  }

  CsrMatrix Transpose() const {
    CsrMatrix t(num_cols, num_rows);
    t.col_idx.resize(col_idx.size());
    t.values.resize(values.size());
    for (Index c : col_idx) ++t.row_ptr[static_cast<size_t>(c) + 1];
    std::partial_sum(t.row_ptr.begin(), t.row_ptr.end(), t.row_ptr.begin());
    std::vector<Index> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
    // Rows are visited in ascending order, so each transposed row ends up
    // column-sorted.
    for (Index r = 0; r < num_rows; ++r) {
      auto cols = RowCols(r);
      auto vals = RowValues(r);
      for (size_t k = 0; k < cols.size(); ++k) {
        const Index slot = next[static_cast<size_t>(cols[k])]++;
        t.col_idx[static_cast<size_t>(slot)] = r;
        t.values[static_cast<size_t>(slot)] = vals[k];
      }
    }
    return t;
  }

  template <typename Other>
  CsrMatrix<Other> Cast() const {
    CsrMatrix<Other> out;
    out.num_rows = num_rows;
    out.num_cols = num_cols;
    out.row_ptr = row_ptr;
    out.col_idx = col_idx;
    out.values.assign(values.begin(), values.end());
    return out;
  }

  bool operator==(const CsrMatrix& o) const {
    return num_rows == o.num_rows && num_cols == o.num_cols && row_ptr == o.row_ptr &&
           col_idx == o.col_idx && values == o.values;
  }
};

// Dense row-major matrix.
template <typename Real>
struct DenseMatrix {
  Index num_rows = 0;
  Index num_cols = 0;
  std::vector<Real> data;

  DenseMatrix() = default;
  DenseMatrix(Index rows, Index cols, Real fill = Real{0})
      : num_rows(rows), num_cols(cols), data(static_cast<size_t>(rows * cols), fill) {}

  Real& operator()(Index r, Index c) { return data[static_cast<size_t>(r * num_cols + c)]; }
  Real operator()(Index r, Index c) const {
    return data[static_cast<size_t>(r * num_cols + c)];
  }
  std::span<Real> Row(Index r) {
    return {data.data() + r * num_cols, static_cast<size_t>(num_cols)};
  }
  std::span<const Real> Row(Index r) const {
    return {data.data() + r * num_cols, static_cast<size_t>(num_cols)};
  }

  template <typename Other>
  DenseMatrix<Other> Cast() const {
    DenseMatrix<Other> out;
    out.num_rows = num_rows;
    out.num_cols = num_cols;
    out.data.assign(data.begin(), data.end());
    return out;
  }

  bool operator==(const DenseMatrix&) const = default;
};

}  // namespace cfrmat

#endif  // CFRMAT_CSR_H_
