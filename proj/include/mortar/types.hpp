#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mortar {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
/// Compressed-row sparse matrix.
using CsrMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;
using Point = std::array<double, 3>;

/// Ragged array (offsets + flat data), used for every incidence relation.
struct Incidence {
  std::vector<int> offsets{0};
  std::vector<int> data;

  [[nodiscard]] int size() const { return static_cast<int>(offsets.size()) - 1; }
  [[nodiscard]] std::span<const int> operator[](int row) const {
    return {data.data() + offsets[row], data.data() + offsets[row + 1]};
  }
  [[nodiscard]] int row_size(int row) const { return offsets[row + 1] - offsets[row]; }

  template <class Range>
  void push_row(const Range& row) {
    data.insert(data.end(), row.begin(), row.end());
    offsets.push_back(static_cast<int>(data.size()));
  }

  /// Transposes a relation rows -> [0, num_columns); rows of the result are sorted.
  [[nodiscard]] Incidence transpose(int num_columns) const {
    Incidence t;
    t.offsets.assign(num_columns + 1, 0);
    for (int c : data) ++t.offsets[c + 1];
    for (int c = 0; c < num_columns; ++c) t.offsets[c + 1] += t.offsets[c];
    t.data.resize(data.size());
    std::vector<int> fill(t.offsets.begin(), t.offsets.end() - 1);
    for (int r = 0; r < size(); ++r)
      for (int c : (*this)[r]) t.data[fill[c]++] = r;
    return t;
  }
};

}  // namespace mortar
