#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace detperm {

/// Dense real matrix, row-major. Entries are validated to be finite on
/// construction; dimensions are strictly positive.
class DenseMatrix {
 public:
  /// Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of row-major entries; entries.size() must equal
  /// rows * cols and every entry must be finite.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix constant(std::size_t rows, std::size_t cols, double value);
  static DenseMatrix diagonal(const std::vector<double>& diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  const std::vector<double>& entries() const noexcept { return entries_; }

  DenseMatrix transposed() const;

  /// Largest |entry|; 0 for the zero matrix.
  double max_abs() const noexcept;

  /// True if every entry is >= 0.
  bool is_nonnegative() const noexcept;

  bool operator==(const DenseMatrix& other) const noexcept = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

}  // namespace detperm
