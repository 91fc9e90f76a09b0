// Command-line front end: matrix permanent estimation, exact permanents,
// spectral summaries, and batch experiments, all reproducible from a seed.
//
// Exit codes: 0 success, 1 internal failure, 2 input parse error (with a
// line/column diagnostic), 3 configuration or domain error, 4 oracle size
// limit exceeded.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "detperm/errors.hpp"
#include "detperm/estimator.hpp"
#include "detperm/experiment.hpp"
#include "detperm/json_writer.hpp"
#include "detperm/linalg.hpp"
#include "detperm/matrix_io.hpp"
#include "detperm/permanent.hpp"
#include "detperm/rng.hpp"
#include "detperm/sampling.hpp"
#include "detperm/spectrum.hpp"
#include "detperm/stats.hpp"
#include "detperm/version.hpp"

namespace {

using namespace detperm;

std::uint64_t resolve_seed(const std::string& text) {
  if (text == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  try {
    std::size_t used = 0;
    const std::uint64_t value = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("--seed expects an unsigned integer or 'random'");
  }
}

void emit(const std::string& output_path, const std::string& text) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) {
    throw ConfigError("cannot open output file: " + output_path);
  }
  out << text;
}

void write_provenance(JsonWriter& w, std::uint64_t seed,
                      const std::string& command_line) {
  w.key("provenance");
  w.begin_object();
  w.field("seed", seed);
  w.field("version", kVersion);
  w.field("command_line", command_line);
  w.end_object();
}

struct EstimateOpts {
  std::string input;
  std::string output;
  std::string kind = "gg";
  std::uint64_t trials = 100;
  std::string aggregation = "mean";
  std::string seed_text = std::to_string(kDefaultSeed);
  int threads = 0;
  bool verbose = false;
};

int run_estimate(const EstimateOpts& opts) {
  const DenseMatrix m = read_matrix_file(opts.input);
  const std::uint64_t seed = resolve_seed(opts.seed_text);

  EstimatorConfig cfg;
  cfg.kind = opts.kind == "barvinok" ? EstimatorKind::kBarvinok
                                     : EstimatorKind::kGodsilGutman;
  cfg.trials = static_cast<std::size_t>(opts.trials);
  cfg.aggregation = opts.aggregation == "median"   ? Aggregation::kMedian
                    : opts.aggregation == "single" ? Aggregation::kSingle
                                                   : Aggregation::kMean;
  cfg.seed = {seed, 0};
  cfg.threads = opts.threads;

  const EstimateReport report = estimate_permanent(m, cfg);

  // --threads and --output are deliberately left out: neither changes the
  // numbers, and the report must be byte-identical across both.
  std::string cmd = "estimate --input " + opts.input + " --kind " + opts.kind +
                    " --trials " + std::to_string(opts.trials) +
                    " --aggregation " + opts.aggregation + " --seed " +
                    std::to_string(seed);
  if (opts.verbose) cmd += " --verbose";

  std::ostringstream buf;
  JsonWriter w(buf);
  w.begin_object();
  w.key("estimate_log");
  if (report.estimate.is_zero()) {
    w.null();
  } else {
    w.value(report.estimate.log_abs);
  }
  w.field("estimate_sign", report.estimate.sign);
  w.field("trials", static_cast<std::uint64_t>(cfg.trials));
  w.field("aggregation", opts.aggregation);
  if (opts.verbose) {
    w.key("per_trial_log");
    w.begin_array();
    for (const LogSignedValue& v : report.per_trial) {
      if (v.is_zero()) {
        w.null();
      } else {
        w.value(v.log_abs);
      }
    }
    w.end_array();
  }
  w.key("exact_log");
  if (report.exact && !report.exact->value.is_zero()) {
    w.value(report.exact->value.log_abs);
  } else {
    w.null();
  }
  w.key("log_ratio");
  if (report.log_ratio) {
    w.value(*report.log_ratio);
  } else {
    w.null();
  }
  w.field("trials_zero", static_cast<std::uint64_t>(report.trials_zero));
  w.field("seed", seed);
  w.field("kind", opts.kind);
  write_provenance(w, seed, cmd);
  w.end_object();
  w.finish();

  emit(opts.output, buf.str());
  return 0;
}

struct ExactOpts {
  std::string input;
  std::string output;
  std::string method = "ryser";
  int threads = 0;
};

int run_exact(const ExactOpts& opts) {
  const DenseMatrix m = read_matrix_file(opts.input);
  const PermanentValue exact = opts.method == "naive"
                                   ? permanent_naive(m)
                                   : permanent_ryser(m, opts.threads);

  const std::string cmd =
      "exact --input " + opts.input + " --method " + opts.method;

  std::ostringstream buf;
  JsonWriter w(buf);
  w.begin_object();
  w.key("exact_log");
  if (exact.value.is_zero()) {
    w.null();
  } else {
    w.value(exact.value.log_abs);
  }
  w.field("exact_sign", exact.value.sign);
  w.key("exact_value");
  if (exact.exact_small) {
    w.value(*exact.exact_small);
  } else {
    w.null();
  }
  w.field("method", opts.method);
  w.field("n", static_cast<std::uint64_t>(m.rows()));
  write_provenance(w, kDefaultSeed, cmd);
  w.end_object();
  w.finish();

  emit(opts.output, buf.str());
  return 0;
}

struct SpectrumOpts {
  std::string input;
  std::string output;
  std::string epsilon_text = "paper";
};

int run_spectrum(const SpectrumOpts& opts) {
  const DenseMatrix m = read_matrix_file(opts.input);

  double epsilon = 0.0;
  if (opts.epsilon_text == "paper") {
    epsilon = default_epsilon(m.rows());
  } else {
    try {
      std::size_t used = 0;
      epsilon = std::stod(opts.epsilon_text, &used);
      if (used != opts.epsilon_text.size()) {
        throw std::invalid_argument(opts.epsilon_text);
      }
    } catch (const std::exception&) {
      throw ConfigError("--epsilon expects a number or 'paper'");
    }
  }

  const SpectrumSummary s = spectrum_split(m, epsilon);

  const std::string cmd = "spectrum --input " + opts.input + " --epsilon " +
                          (opts.epsilon_text == "paper"
                               ? std::string("paper")
                               : format_double(epsilon));

  std::ostringstream buf;
  JsonWriter w(buf);
  w.begin_object();
  w.field("epsilon", s.epsilon);
  w.key("sigma");
  w.begin_array();
  for (double v : s.sigma) w.value(v);
  w.end_array();
  w.field("log_det_trunc", s.log_det_trunc);
  w.field("log_det_small", s.log_det_small);
  w.field("s_eps", static_cast<std::uint64_t>(s.s_eps));
  w.field("sigma_min", s.sigma_min);
  write_provenance(w, kDefaultSeed, cmd);
  w.end_object();
  w.finish();

  emit(opts.output, buf.str());
  return 0;
}

struct ExperimentOpts {
  std::string input;
  std::string output;
  std::string seed_text;  // empty = keep the spec file's seed
  int threads = 0;
};

int run_experiment_cmd(const ExperimentOpts& opts) {
  ExperimentSpec spec = load_experiment_spec(opts.input);
  if (!opts.seed_text.empty()) {
    spec.seed = {resolve_seed(opts.seed_text), 0};
  }

  const std::string cmd = "experiment --input " + opts.input + " --seed " +
                          std::to_string(spec.seed.seed);

  std::ostringstream buf;
  run_experiment(spec, opts.threads, buf, cmd);
  emit(opts.output, buf.str());
  return 0;
}

struct SelftestOpts {
  std::string seed_text = std::to_string(kDefaultSeed);
  int threads = 0;
};

bool report_check(const char* what, bool ok) {
  std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << '\n';
  return ok;
}

int run_selftest(const SelftestOpts& opts) {
  const std::uint64_t seed = resolve_seed(opts.seed_text);
  bool all_ok = true;

  {
    // Counter-permutation known answers (the two all-same-bit patterns).
    const auto zero = philox4x32_10({0, 0, 0, 0}, {0, 0});
    const std::array<std::uint32_t, 4> zero_expect{0x6627e8d5u, 0xe169c58du,
                                                   0xbc57ac4cu, 0x9b00dbd8u};
    const auto ones =
        philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                      {0xffffffffu, 0xffffffffu});
    const std::array<std::uint32_t, 4> ones_expect{0x408f276du, 0x41c83b0eu,
                                                   0xa20bc7c6u, 0x6d5451fdu};
    all_ok &= report_check("random stream known-answer vectors",
                           zero == zero_expect && ones == ones_expect);
  }

  {
    const DenseMatrix m(2, 2, {1, 2, 3, 4});
    const auto [avg, exact] = unbiasedness_exhaustive(m);
    const DenseMatrix ones = DenseMatrix::constant(3, 3, 1.0);
    const auto [avg3, exact3] = unbiasedness_exhaustive(ones);
    all_ok &= report_check(
        "exhaustive estimator average equals the permanent",
        std::fabs(avg - exact) <= 1e-10 * std::fabs(exact) &&
            std::fabs(avg3 - exact3) <= 1e-10 * std::fabs(exact3));
  }

  {
    bool ok = true;
    const EntryModel model = EntryModel::gaussian();
    for (std::uint64_t t = 0; t < 5; ++t) {
      const DenseMatrix a =
          sample_matrix(model, 40, SeededSource{seed, t});
      const LogSignedValue lu = log_det_lu(a);
      const DistanceDeterminant dd = log_det_distances(a);
      ok = ok && std::fabs(lu.log_abs - dd.det.log_abs) <= 1e-8 &&
           lu.sign == dd.det.sign;

      NeumaierSum log_sv;
      for (double s : singular_values(a)) log_sv.add(std::log(s));
      ok = ok && std::fabs(lu.log_abs - log_sv.value()) <= 1e-8;
    }
    all_ok &= report_check("determinant routes agree (LU, distances, SVD)", ok);
  }

  {
    bool ok = true;
    const EntryModel model = EntryModel::rademacher();
    for (std::uint64_t t = 0; t < 20; ++t) {
      const DenseMatrix a =
          sample_matrix(model, 6, SeededSource{seed, 100 + t});
      const double naive = *permanent_naive(a).exact_small;
      const double ryser = *permanent_ryser(a, opts.threads).exact_small;
      const double scale = std::max(1.0, std::fabs(naive));
      ok = ok && std::fabs(naive - ryser) <= 1e-9 * scale;
    }
    all_ok &= report_check("Ryser permanent matches the naive oracle", ok);
  }

  {
    bool ok = true;
    const EntryModel model = EntryModel::rademacher();
    for (std::uint64_t t = 0; t < 10; ++t) {
      const DenseMatrix a =
          sample_matrix(model, 20, SeededSource{seed, 200 + t});
      const double eps = default_epsilon(20);
      const SpectrumSummary s = spectrum_split(a, eps);
      const LogSignedValue lu = log_det_lu(a);
      if (lu.is_zero()) continue;
      ok = ok &&
           std::fabs(s.log_det_trunc + s.log_det_small - lu.log_abs) <= 1e-9;
      const auto [lhs, rhs] = detsmall_bound_check(a, eps);
      ok = ok && 0.0 >= lhs && lhs >= rhs;
    }
    all_ok &= report_check("spectrum split reassembles log|det|", ok);
  }

  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized determinant estimators for matrix permanents"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  EstimateOpts est;
  auto* estimate = app.add_subcommand(
      "estimate", "Estimate the permanent of a nonnegative matrix");
  estimate->add_option("--input", est.input, "Matrix file (CSV or JSON)")
      ->required();
  estimate->add_option("--output", est.output, "Report path (default stdout)");
  estimate->add_option("--kind", est.kind, "Estimator kind")
      ->check(CLI::IsMember({"gg", "barvinok"}));
  estimate->add_option("--trials", est.trials, "Number of trials");
  estimate->add_option("--aggregation", est.aggregation, "Trial aggregation")
      ->check(CLI::IsMember({"mean", "median", "single"}));
  estimate->add_option("--seed", est.seed_text, "Seed (integer or 'random')");
  estimate->add_option("--threads", est.threads, "Worker thread cap");
  estimate->add_flag("--verbose", est.verbose,
                     "Include per-trial values in the report");

  ExactOpts exact;
  auto* exact_cmd =
      app.add_subcommand("exact", "Compute the permanent exactly");
  exact_cmd->add_option("--input", exact.input, "Matrix file (CSV or JSON)")
      ->required();
  exact_cmd->add_option("--output", exact.output, "Report path");
  exact_cmd->add_option("--method", exact.method, "Oracle to use")
      ->check(CLI::IsMember({"ryser", "naive"}));
  exact_cmd->add_option("--threads", exact.threads, "Worker thread cap");

  SpectrumOpts spectrum;
  auto* spectrum_cmd = app.add_subcommand(
      "spectrum", "Singular value split of the determinant");
  spectrum_cmd
      ->add_option("--input", spectrum.input, "Matrix file (CSV or JSON)")
      ->required();
  spectrum_cmd->add_option("--output", spectrum.output, "Report path");
  spectrum_cmd->add_option("--epsilon", spectrum.epsilon_text,
                           "Threshold (number or 'paper' for n^(1/6))");

  ExperimentOpts experiment;
  auto* experiment_cmd =
      app.add_subcommand("experiment", "Run an experiment spec file");
  experiment_cmd
      ->add_option("--input", experiment.input, "Experiment spec (JSON)")
      ->required();
  experiment_cmd->add_option("--output", experiment.output, "Report path");
  experiment_cmd->add_option("--seed", experiment.seed_text,
                             "Override the spec file's seed");
  experiment_cmd->add_option("--threads", experiment.threads,
                             "Worker thread cap");

  SelftestOpts selftest;
  auto* selftest_cmd =
      app.add_subcommand("selftest", "Run the built-in oracle checks");
  selftest_cmd->add_option("--seed", selftest.seed_text, "Seed");
  selftest_cmd->add_option("--threads", selftest.threads, "Worker thread cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (*estimate) return run_estimate(est);
    if (*exact_cmd) return run_exact(exact);
    if (*spectrum_cmd) return run_spectrum(spectrum);
    if (*experiment_cmd) return run_experiment_cmd(experiment);
    if (*selftest_cmd) return run_selftest(selftest);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
