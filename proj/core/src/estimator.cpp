#include "detperm/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "detperm/errors.hpp"
#include "detperm/linalg.hpp"
#include "detperm/parallel.hpp"
#include "detperm/sampling.hpp"
#include "detperm/stats.hpp"

namespace detperm {

LogSignedValue aggregate_trials(std::span<const LogSignedValue> per_trial,
                                Aggregation aggregation) {
  if (per_trial.empty()) {
    throw ConfigError("aggregation needs at least one trial");
  }
  const double neg_inf = -std::numeric_limits<double>::infinity();

  switch (aggregation) {
    case Aggregation::kSingle:
      if (per_trial.size() != 1) {
        throw ConfigError("Single aggregation requires exactly one trial");
      }
      return per_trial[0];

    case Aggregation::kMean: {
      std::vector<double> logs(per_trial.size());
      for (std::size_t i = 0; i < per_trial.size(); ++i) {
        logs[i] = per_trial[i].is_zero() ? neg_inf : per_trial[i].log_abs;
      }
      const double total = log_sum_exp(logs);
      if (total == neg_inf) return LogSignedValue::zero();
      return LogSignedValue::from_log(
          1, total - std::log(static_cast<double>(per_trial.size())));
    }

    case Aggregation::kMedian: {
      std::vector<double> logs(per_trial.size());
      for (std::size_t i = 0; i < per_trial.size(); ++i) {
        logs[i] = per_trial[i].is_zero() ? neg_inf : per_trial[i].log_abs;
      }
      std::sort(logs.begin(), logs.end());
      const std::size_t t = logs.size();
      if (t % 2 == 1) {
        const double mid = logs[t / 2];
        return mid == neg_inf ? LogSignedValue::zero()
                              : LogSignedValue::from_log(1, mid);
      }
      const std::array<double, 2> central{logs[t / 2 - 1], logs[t / 2]};
      const double avg = log_sum_exp(central) - std::log(2.0);
      return avg == neg_inf ? LogSignedValue::zero()
                            : LogSignedValue::from_log(1, avg);
    }
  }
  throw ConfigError("unknown aggregation");
}

EstimateReport estimate_permanent(const DenseMatrix& m,
                                  const EstimatorConfig& cfg) {
  if (!m.is_square()) {
    throw DomainError("estimator requires a square matrix");
  }
  if (!m.is_nonnegative()) {
    throw DomainError("estimator requires nonnegative entries");
  }
  if (cfg.trials == 0) {
    throw ConfigError("trials must be at least 1");
  }
  if (cfg.aggregation == Aggregation::kSingle && cfg.trials != 1) {
    throw ConfigError("Single aggregation requires exactly one trial");
  }

  EstimateReport report;
  report.seed = cfg.seed;
  report.kind = cfg.kind;
  report.aggregation = cfg.aggregation;
  report.per_trial.resize(cfg.trials);

  const bool gaussian = cfg.kind == EstimatorKind::kBarvinok;
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    const SeededSource source = cfg.seed.offset(t);
    const DenseMatrix lifted = gaussian ? barvinok_lift(m, source)
                                        : godsil_gutman_lift(m, source);
    report.per_trial[t] = log_det_lu(lifted).squared();
  });

  for (const LogSignedValue& v : report.per_trial) {
    if (v.is_zero()) ++report.trials_zero;
  }
  report.estimate = aggregate_trials(report.per_trial, cfg.aggregation);

  if (m.rows() <= kRyserPermanentLimit) {
    report.exact = permanent_ryser(m, cfg.threads);
    if (!report.estimate.is_zero() && !report.exact->value.is_zero()) {
      report.log_ratio =
          report.estimate.log_abs - report.exact->value.log_abs;
    }
  }
  return report;
}

namespace {

// Exact determinant by cofactor expansion, n <= 4.
double det_small(const double* a, std::size_t n) {
  switch (n) {
    case 1:
      return a[0];
    case 2:
      return a[0] * a[3] - a[1] * a[2];
    case 3:
      return a[0] * (a[4] * a[8] - a[5] * a[7]) -
             a[1] * (a[3] * a[8] - a[5] * a[6]) +
             a[2] * (a[3] * a[7] - a[4] * a[6]);
    case 4: {
      double total = 0.0;
      double minor[9];
      for (std::size_t j = 0; j < 4; ++j) {
        std::size_t c = 0;
        for (std::size_t i = 1; i < 4; ++i) {
          for (std::size_t k = 0; k < 4; ++k) {
            if (k == j) continue;
            minor[c++] = a[i * 4 + k];
          }
        }
        const double term = a[j] * det_small(minor, 3);
        total += (j % 2 == 0) ? term : -term;
      }
      return total;
    }
    default:
      throw SizeError("exhaustive check supports n <= 4");
  }
}

}  // namespace

std::pair<double, double> unbiasedness_exhaustive(const DenseMatrix& m) {
  if (!m.is_square()) {
    throw DomainError("estimator requires a square matrix");
  }
  if (!m.is_nonnegative()) {
    throw DomainError("estimator requires nonnegative entries");
  }
  const std::size_t n = m.rows();
  if (n > 4) {
    throw SizeError("unbiasedness_exhaustive supports n <= 4");
  }

  std::array<double, 16> root{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      root[i * n + j] = std::sqrt(m(i, j));
    }
  }

  const std::size_t cells = n * n;
  const std::uint64_t assignments = std::uint64_t{1} << cells;
  NeumaierSum sum;
  std::array<double, 16> lifted{};
  for (std::uint64_t mask = 0; mask < assignments; ++mask) {
    for (std::size_t c = 0; c < cells; ++c) {
      lifted[c] = ((mask >> c) & 1u) ? root[c] : -root[c];
    }
    const double det = det_small(lifted.data(), n);
    sum.add(det * det);
  }
  const double average = sum.value() / static_cast<double>(assignments);
  const double exact = *permanent_naive(m).exact_small;
  return {average, exact};
}

std::vector<RatioQuantiles> approximation_ratio_sweep(
    const MatrixFamily& family, const std::vector<std::size_t>& sizes,
    std::size_t trials_per_size, const EstimatorConfig& cfg) {
  if (trials_per_size == 0) {
    throw ConfigError("trials must be at least 1");
  }
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<RatioQuantiles> table;
  table.reserve(sizes.size());
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const std::size_t n = sizes[s];
    if (n > kRyserPermanentLimit) {
      throw SizeError("approximation ratio sweep needs the exact oracle; n <= " +
                      std::to_string(kRyserPermanentLimit));
    }
    // Stream budget per size: offset 0 draws the base matrix, trials use
    // offsets 1..trials.
    const SeededSource size_source = cfg.seed.block(s);
    const DenseMatrix base = family(n, size_source);
    const PermanentValue exact = permanent_ryser(base, cfg.threads);
    if (exact.value.is_zero()) {
      throw DomainError("family produced a matrix with zero permanent");
    }

    std::vector<double> abs_log_ratio(trials_per_size, 0.0);
    const bool gaussian = cfg.kind == EstimatorKind::kBarvinok;
    parallel_for(trials_per_size, cfg.threads, [&](std::size_t t) {
      const SeededSource trial_source = size_source.offset(1 + t);
      const DenseMatrix lifted = gaussian
                                     ? barvinok_lift(base, trial_source)
                                     : godsil_gutman_lift(base, trial_source);
      const LogSignedValue det2 = log_det_lu(lifted).squared();
      abs_log_ratio[t] = det2.is_zero()
                             ? inf
                             : std::fabs(det2.log_abs - exact.value.log_abs);
    });

    RatioQuantiles row;
    row.n = n;
    for (double r : abs_log_ratio) {
      if (r == inf) ++row.trials_zero;
    }
    row.q50 = quantile(abs_log_ratio, 0.50);
    row.q90 = quantile(abs_log_ratio, 0.90);
    row.q99 = quantile(abs_log_ratio, 0.99);
    row.abs_log_ratio = std::move(abs_log_ratio);
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace detperm
