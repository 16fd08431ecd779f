#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "qinv/poly.hpp"

namespace qinv {

/// Dense matrix over the rationals (row-major).
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

std::size_t rank(RationalMatrix m);

/// Reduced row echelon form; returns the pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m);

/// Basis of {x : m x = 0}, one vector per free column, from the RREF.
std::vector<std::vector<Rational>> kernel(RationalMatrix m);

/// Sparse vector: strictly increasing column indices, nonzero values.
using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

/// Incremental sparse Gaussian elimination over the rationals. Rows are
/// reduced against the current echelon basis on insertion; kernel() and
/// basis() return results in reduced row echelon form, so they depend only
/// on the row space, not on the insertion order.
class SparseEliminator {
 public:
  explicit SparseEliminator(std::size_t cols) : cols_(cols) {}

  /// Returns true when the row enlarged the row space.
  bool add_row(SparseRow row);
  std::size_t rank() const { return pivots_.size(); }
  std::size_t cols() const { return cols_; }

  /// Reduced row echelon basis of the row space.
  std::vector<SparseRow> basis() const;
  /// Kernel basis, one vector per free column, ordered by free column.
  std::vector<SparseRow> kernel() const;
  /// Reduces `row` against the row space; the zero row means membership.
  SparseRow reduce(SparseRow row) const;

 private:
  std::size_t cols_;
  std::map<std::size_t, SparseRow> pivots_;  // pivot column -> row with leading 1
};

}  // namespace qinv
