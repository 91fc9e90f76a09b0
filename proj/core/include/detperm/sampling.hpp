#pragma once

#include <cstddef>

#include "detperm/matrix.hpp"
#include "detperm/rng.hpp"

namespace detperm {

/// A per-entry parameter that is either one scalar broadcast to every
/// position or a full matrix of values.
class ParamGrid {
 public:
  ParamGrid(double scalar);  // NOLINT(google-explicit-constructor)
  ParamGrid(DenseMatrix values);  // NOLINT(google-explicit-constructor)

  bool is_scalar() const { return scalar_form_; }
  double at(std::size_t i, std::size_t j) const {
    return scalar_form_ ? scalar_ : grid_(i, j);
  }

  /// Throws ConfigError unless the grid broadcasts to rows x cols.
  void require_shape(std::size_t rows, std::size_t cols,
                     const char* name) const;

  /// True when pred holds for every represented value.
  bool all_of(bool (*pred)(double)) const;

 private:
  bool scalar_form_;
  double scalar_ = 0.0;
  DenseMatrix grid_;
};

enum class EntryModelKind { kRademacherScaled, kGaussianScaled, kShiftedBernoulli };

/// Distribution of one matrix entry: a_ij is
///   RademacherScaled:  +-scale_ij, P(+) = bias_ij
///   GaussianScaled:    scale_ij * g with g standard normal
///   ShiftedBernoulli:  shift_ij + eps_ij * scale_ij, eps a biased sign
/// Scales must be strictly positive and biases strictly inside (0, 1);
/// shift is identically zero except in the ShiftedBernoulli form. Use the
/// factories below, which validate.
struct EntryModel {
  EntryModelKind kind;
  ParamGrid scale;
  ParamGrid shift;
  ParamGrid bias;

  static EntryModel rademacher(ParamGrid scale = 1.0, ParamGrid bias = 0.5);
  static EntryModel gaussian(ParamGrid scale = 1.0);
  static EntryModel shifted_bernoulli(ParamGrid shift, ParamGrid scale,
                                      ParamGrid bias = 0.5);
};

/// One n x n draw from the model. Entries are generated row-major, one
/// variate each, so the output is a pure function of (model, n, source).
DenseMatrix sample_matrix(const EntryModel& model, std::size_t n,
                          SeededSource source);

/// A_ij = sqrt(M_ij) * u_ij with u_ij independent fair signs. M must be
/// square with nonnegative entries.
DenseMatrix godsil_gutman_lift(const DenseMatrix& m, SeededSource source);

/// Same lift with u_ij independent standard normals.
DenseMatrix barvinok_lift(const DenseMatrix& m, SeededSource source);

}  // namespace detperm
