#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cvqa {

/// Compressed-sparse-row matrix of doubles. Rows are sorted by column.
class SparseMatrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SparseMatrix() = default;

  /// Duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  /// Returns 0 for entries outside the sparsity pattern.
  double at(std::size_t row, std::size_t col) const;
  double max_abs() const;
  /// Infinity norm (max absolute row sum).
  double norm_inf() const;
  std::vector<double> diagonal() const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// <x|A|x> for a complex vector. A is assumed real symmetric, so the result is real.
  double quadratic_form(std::span<const std::complex<double>> x) const;

  /// Largest |A_ij - A_ji| over the pattern.
  double asymmetry() const;

  std::vector<double> to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace cvqa
