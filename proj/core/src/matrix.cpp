#include "detperm/matrix.hpp"

#include <cmath>
#include <utility>

#include "detperm/errors.hpp"

namespace detperm {

namespace {

void check_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw DomainError("matrix dimensions must be positive");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
  check_dims(rows, cols);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  check_dims(rows, cols);
  if (entries_.size() != rows_ * cols_) {
    throw ConfigError("entry count does not match matrix dimensions");
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) {
      throw DomainError("matrix entries must be finite");
    }
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::constant(std::size_t rows, std::size_t cols,
                                  double value) {
  check_dims(rows, cols);
  return DenseMatrix(rows, cols, std::vector<double>(rows * cols, value));
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      t(j, i) = (*this)(i, j);
    }
  }
  return t;
}

double DenseMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::fabs(v));
  return m;
}

bool DenseMatrix::is_nonnegative() const noexcept {
  for (double v : entries_) {
    if (v < 0.0) return false;
  }
  return true;
}

}  // namespace detperm
