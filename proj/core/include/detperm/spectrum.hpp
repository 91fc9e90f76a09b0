#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "detperm/matrix.hpp"
#include "detperm/rng.hpp"
#include "detperm/sampling.hpp"

namespace detperm {

/// The determinant magnitude factored across a threshold epsilon:
///   log|det A| = log_det_trunc + log_det_small
/// where each squared singular value sigma_i^2 contributes
/// max{sigma_i^2, eps^2} to the truncated part and min{sigma_i^2/eps^2, 1}
/// to the small part. Singular values are stored ascending, so sigma_min
/// is sigma.front(). A zero singular value sends log_det_small to
/// -infinity (and |det A| to zero) while log_det_trunc stays finite.
struct SpectrumSummary {
  std::vector<double> sigma;  // ascending
  double epsilon = 0.0;
  double log_det_trunc = 0.0;
  double log_det_small = 0.0;  // always <= 0; -infinity when sigma_min == 0
  std::size_t s_eps = 0;       // how many sigma_i <= epsilon
  double sigma_min = 0.0;
};

/// The threshold the analysis standardizes on: epsilon = n^{1/6}.
double default_epsilon(std::size_t n);

SpectrumSummary spectrum_split(const DenseMatrix& a, double epsilon);

/// Truncated log-determinant ½ sum max{2 log eps, log sigma_i^2}; equal to
/// spectrum_split(a, epsilon).log_det_trunc, exposed separately because the
/// concentration experiment evaluates it in bulk.
double truncated_log_statistic(const DenseMatrix& a, double epsilon);

/// (log det_small, s_eps * min{0, log(sigma_min / epsilon)}). The first
/// coordinate dominates the second and both are nonpositive.
std::pair<double, double> detsmall_bound_check(const DenseMatrix& a,
                                               double epsilon);

struct SigmaMinSurvey {
  double min_sigma_min = 0.0;   // smallest sigma_min seen over all trials
  std::size_t below_floor = 0;  // trials with sigma_min < n^{-floor_exponent}
};

/// Samples `trials` matrices from the model and watches how small the
/// smallest singular value gets.
SigmaMinSurvey sigma_min_survey(const EntryModel& model, std::size_t n,
                                std::size_t trials, double floor_exponent,
                                SeededSource source, int threads = 0);

/// Counts trials whose 2r-th smallest singular value drops to
/// r c^2 / (2 sqrt(n - r)) or below, i.e. trials with an unusually thick
/// cluster of small singular values. Requires 1 <= 2r <= n.
std::size_t small_sv_count_survey(const EntryModel& model, std::size_t n,
                                  std::size_t r, std::size_t trials,
                                  double c_bound, SeededSource source,
                                  int threads = 0);

}  // namespace detperm
