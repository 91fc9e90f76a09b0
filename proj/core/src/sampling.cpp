#include "detperm/sampling.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "detperm/errors.hpp"

namespace detperm {

ParamGrid::ParamGrid(double scalar)
    : scalar_form_(true), scalar_(scalar), grid_(1, 1) {}

ParamGrid::ParamGrid(DenseMatrix values)
    : scalar_form_(false), grid_(std::move(values)) {}

void ParamGrid::require_shape(std::size_t rows, std::size_t cols,
                              const char* name) const {
  if (scalar_form_) return;
  if (grid_.rows() != rows || grid_.cols() != cols) {
    throw ConfigError(std::string(name) + " grid is " +
                      std::to_string(grid_.rows()) + "x" +
                      std::to_string(grid_.cols()) + ", expected " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  }
}

bool ParamGrid::all_of(bool (*pred)(double)) const {
  if (scalar_form_) return pred(scalar_);
  for (double v : grid_.entries()) {
    if (!pred(v)) return false;
  }
  return true;
}

namespace {

bool positive(double v) { return v > 0.0; }
bool open_unit(double v) { return v > 0.0 && v < 1.0; }

void require(const ParamGrid& g, bool (*pred)(double), const char* what) {
  if (!g.all_of(pred)) throw DomainError(what);
}

}  // namespace

EntryModel EntryModel::rademacher(ParamGrid scale, ParamGrid bias) {
  require(scale, positive, "scale must be strictly positive");
  require(bias, open_unit, "bias must lie strictly inside (0, 1)");
  return {EntryModelKind::kRademacherScaled, std::move(scale), 0.0,
          std::move(bias)};
}

EntryModel EntryModel::gaussian(ParamGrid scale) {
  require(scale, positive, "scale must be strictly positive");
  return {EntryModelKind::kGaussianScaled, std::move(scale), 0.0, 0.5};
}

EntryModel EntryModel::shifted_bernoulli(ParamGrid shift, ParamGrid scale,
                                         ParamGrid bias) {
  require(scale, positive, "scale must be strictly positive");
  require(bias, open_unit, "bias must lie strictly inside (0, 1)");
  return {EntryModelKind::kShiftedBernoulli, std::move(scale),
          std::move(shift), std::move(bias)};
}

DenseMatrix sample_matrix(const EntryModel& model, std::size_t n,
                          SeededSource source) {
  if (n == 0) throw DomainError("matrix dimensions must be positive");
  model.scale.require_shape(n, n, "scale");
  model.shift.require_shape(n, n, "shift");
  model.bias.require_shape(n, n, "bias");

  PhiloxEngine engine(source);
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = model.scale.at(i, j);
      switch (model.kind) {
        case EntryModelKind::kRademacherScaled:
          out(i, j) = c * engine.next_sign(model.bias.at(i, j));
          break;
        case EntryModelKind::kGaussianScaled:
          out(i, j) = c * engine.next_normal();
          break;
        case EntryModelKind::kShiftedBernoulli:
          out(i, j) =
              model.shift.at(i, j) + engine.next_sign(model.bias.at(i, j)) * c;
          break;
      }
    }
  }
  return out;
}

namespace {

DenseMatrix lift_impl(const DenseMatrix& m, SeededSource source,
                      bool gaussian_weights) {
  if (!m.is_square()) {
    throw DomainError("lift requires a square matrix");
  }
  if (!m.is_nonnegative()) {
    throw DomainError("lift requires nonnegative entries");
  }
  PhiloxEngine engine(source);
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double u =
          gaussian_weights ? engine.next_normal()
                           : static_cast<double>(engine.next_sign());
      // Zero entries stay exactly zero, but the weight draw still happens
      // so entry (i, j) always sits at the same stream position.
      out(i, j) = m(i, j) == 0.0 ? 0.0 : std::sqrt(m(i, j)) * u;
    }
  }
  return out;
}

}  // namespace

DenseMatrix godsil_gutman_lift(const DenseMatrix& m, SeededSource source) {
  return lift_impl(m, source, false);
}

DenseMatrix barvinok_lift(const DenseMatrix& m, SeededSource source) {
  return lift_impl(m, source, true);
}

}  // namespace detperm
