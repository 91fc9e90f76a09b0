#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "detperm/estimator.hpp"
#include "detperm/rng.hpp"
#include "detperm/sampling.hpp"
#include "detperm/stats.hpp"

namespace detperm {

/// How a log|det| sample is produced for the central-limit study.
///  - kDirectMatrix: draw an n x n standard Gaussian matrix, take its
///    determinant.
///  - kChiConstruction: draw the squared row distances directly, d_i^2
///    chi-square with n - i + 1 degrees of freedom (row i faces the span
///    of i - 1 earlier rows), and sum their half-logs. The two routes
///    produce identically distributed statistics.
enum class CltRoute { kDirectMatrix, kChiConstruction };

struct CltSample {
  std::size_t n = 0;
  /// (log|det A| - ½ log((n-1)!)) / sqrt(½ log n)
  double statistic = 0.0;
  CltRoute route = CltRoute::kDirectMatrix;
};

struct CltResult {
  std::vector<CltSample> samples;  // indexed by trial
  double ks_distance = 0.0;        // against the standard normal CDF
  double ks_pvalue = 0.0;
};

CltResult clt_experiment(std::size_t n, std::size_t trials, CltRoute route,
                         SeededSource source, int threads = 0);

struct TypicalValueResult {
  std::vector<std::size_t> sizes;
  /// Per size: log(median of det^2 over trials) - log n!.
  std::vector<double> median_log_ratio;
  /// Per size, per trial: log det^2 (raw samples for export).
  std::vector<std::vector<double>> log_det2;
  /// Least-squares fit of median_log_ratio against log n; the typical
  /// det^2 runs at n^(-1+o(1)) times its mean, so the slope sits near -1.
  LinearFit fit;
};

/// Standard Gaussian matrices at each size. With fewer than two distinct
/// sizes there is nothing to fit and `fit` stays zeroed.
TypicalValueResult typical_value_experiment(
    const std::vector<std::size_t>& sizes, std::size_t trials,
    SeededSource source, int threads = 0);

struct TruncConcentrationResult {
  double empirical_std = 0.0;
  /// The deviation scale the statistic is measured against:
  /// sqrt(n) log n / epsilon.
  double bound = 0.0;
  std::vector<double> statistics;  // per trial
};

TruncConcentrationResult trunc_concentration_experiment(
    const EntryModel& model, std::size_t n, std::size_t trials,
    double epsilon, SeededSource source, int threads = 0);

struct RatioScalingRow {
  std::size_t n = 0;
  std::string family;  // "all_ones" or "uniform_1_2"
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
  /// Envelope n^{2/3} log n the quantiles are compared against.
  double bound = 0.0;
  std::size_t trials_zero = 0;
  std::vector<double> abs_log_ratio;  // per trial
};

/// Godsil-Gutman ratio quantiles for two base-matrix families (all-ones
/// and fixed uniform-[1,2] entries) at each size.
std::vector<RatioScalingRow> ratio_scaling_experiment(
    const std::vector<std::size_t>& sizes, std::size_t trials,
    SeededSource source, int threads = 0);

/// Declarative experiment description, loadable from JSON:
///   {"name": ..., "sizes": [...], "trials": N, "seed": N,
///    "model": {"kind": ..., "scale": x, "bias": p, "shift": m},
///    "epsilon": x or "paper", "route": "direct"|"chi",
///    "raw_csv": "path"}
/// name selects one of: clt, typical_value, trunc_concentration,
/// ratio_scaling. Fields irrelevant to the chosen experiment may be
/// omitted; trials must be at least 30 and sizes nonempty.
struct ExperimentSpec {
  std::string name;
  EntryModel model = EntryModel::rademacher();
  std::vector<std::size_t> sizes;
  std::size_t trials = 0;
  bool epsilon_paper_rule = true;
  double epsilon_value = 0.0;
  SeededSource seed;
  CltRoute route = CltRoute::kDirectMatrix;
  std::string raw_csv;  // empty = no raw export
};

ExperimentSpec parse_experiment_spec(std::istream& in);
ExperimentSpec load_experiment_spec(const std::string& path);

/// Runs the named experiment and streams a JSON report
/// {name, spec, per_size_results, seed} to `report_out`; writes raw
/// per-trial values as CSV when the spec asks for it. A nonempty
/// `command_line` adds a provenance object (seed, library version, the
/// canonical invocation) so the report records how to reproduce itself.
void run_experiment(const ExperimentSpec& spec, int threads,
                    std::ostream& report_out,
                    const std::string& command_line = "");

}  // namespace detperm
