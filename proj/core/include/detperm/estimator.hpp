#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "detperm/log_signed.hpp"
#include "detperm/matrix.hpp"
#include "detperm/permanent.hpp"
#include "detperm/rng.hpp"

namespace detperm {

enum class EstimatorKind { kGodsilGutman, kBarvinok };

enum class Aggregation { kMean, kMedian, kSingle };

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::kGodsilGutman;
  std::size_t trials = 1;
  Aggregation aggregation = Aggregation::kMean;
  SeededSource seed;
  /// Worker cap only; results are identical for every value.
  int threads = 0;
};

struct EstimateReport {
  /// Aggregated det^2 value; sign is 0 or +1 since squares are nonnegative.
  LogSignedValue estimate;
  /// det^2 of each trial, indexed by trial number.
  std::vector<LogSignedValue> per_trial;
  /// Exact permanent, attached automatically when n is within oracle range.
  std::optional<PermanentValue> exact;
  /// log(estimate) - log(exact); present when both sides are nonzero.
  std::optional<double> log_ratio;
  /// Number of trials whose lifted matrix was exactly singular.
  std::size_t trials_zero = 0;
  SeededSource seed;  // base source; trial t drew from seed.offset(t)
  EstimatorKind kind = EstimatorKind::kGodsilGutman;
  Aggregation aggregation = Aggregation::kMean;
};

/// Combines per-trial det^2 values (all with sign 0 or +1).
///  - Mean: linear-domain average via log-sum-exp; zero trials stay in the
///    denominator.
///  - Median: order statistic of the logs; an even count averages the two
///    central values in the linear domain.
///  - Single: requires exactly one trial.
LogSignedValue aggregate_trials(std::span<const LogSignedValue> per_trial,
                                Aggregation aggregation);

/// Runs the randomized determinant estimator on nonnegative square M:
/// draws cfg.trials lifts (sign weights for GodsilGutman, Gaussian weights
/// for Barvinok), squares each determinant, aggregates. Trials run in
/// parallel but land in per-trial slots, so the report is a pure function
/// of (M, cfg).
EstimateReport estimate_permanent(const DenseMatrix& m,
                                  const EstimatorConfig& cfg);

/// Averages det^2 over every one of the 2^(n*n) sign assignments and pairs
/// it with the exact permanent; the two are equal by the estimator's
/// unbiasedness. Enumeration caps at n <= 4.
std::pair<double, double> unbiasedness_exhaustive(const DenseMatrix& m);

/// Draws matrices from a family at each size, runs the estimator, and
/// summarizes |log(det^2 / per)| quantiles per size.
struct RatioQuantiles {
  std::size_t n = 0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
  std::size_t trials_zero = 0;  // these enter the quantiles as +infinity
  std::vector<double> abs_log_ratio;  // per-trial samples, trial order
};

using MatrixFamily =
    std::function<DenseMatrix(std::size_t n, SeededSource source)>;

std::vector<RatioQuantiles> approximation_ratio_sweep(
    const MatrixFamily& family, const std::vector<std::size_t>& sizes,
    std::size_t trials_per_size, const EstimatorConfig& cfg);

}  // namespace detperm
