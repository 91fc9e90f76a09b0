#include "detperm/experiment.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "detperm/errors.hpp"
#include "detperm/json_writer.hpp"
#include "detperm/linalg.hpp"
#include "detperm/log_signed.hpp"
#include "detperm/matrix_io.hpp"
#include "detperm/parallel.hpp"
#include "detperm/spectrum.hpp"
#include "detperm/version.hpp"

namespace detperm {

namespace {

const double kNegInf = -std::numeric_limits<double>::infinity();

// Keeps per-family sub-streams in ratio_scaling_experiment from colliding
// with the per-size blocks the sweep derives underneath them.
constexpr std::uint64_t kFamilyPhaseStride = 4096;

}  // namespace

CltResult clt_experiment(std::size_t n, std::size_t trials, CltRoute route,
                         SeededSource source, int threads) {
  if (n < 10) {
    throw ConfigError("clt experiment requires n >= 10");
  }
  if (trials < 100) {
    throw ConfigError("clt experiment requires trials >= 100");
  }
  const double nd = static_cast<double>(n);
  // lgamma is evaluated once here: some C libraries write a global sign
  // flag on every call, which would race inside the trial loop.
  const double center = 0.5 * std::lgamma(nd);  // ½ log((n-1)!)
  const double scale = std::sqrt(0.5 * std::log(nd));

  CltResult result;
  result.samples.resize(trials);

  if (route == CltRoute::kDirectMatrix) {
    const EntryModel model = EntryModel::gaussian();
    parallel_for(trials, threads, [&](std::size_t t) {
      const DenseMatrix a = sample_matrix(model, n, source.offset(t));
      const LogSignedValue det = log_det_lu(a);
      const double log_abs = det.is_zero() ? kNegInf : det.log_abs;
      result.samples[t] = {n, (log_abs - center) / scale, route};
    });
  } else {
    parallel_for(trials, threads, [&](std::size_t t) {
      PhiloxEngine engine(source.offset(t));
      NeumaierSum log_det;  // ½ sum of log d_i^2
      for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t degrees = n - i + 1;
        NeumaierSum d2;
        for (std::size_t k = 0; k < degrees; ++k) {
          const double g = engine.next_normal();
          d2.add(g * g);
        }
        log_det.add(0.5 * std::log(d2.value()));
      }
      result.samples[t] = {n, (log_det.value() - center) / scale, route};
    });
  }

  std::vector<double> statistics(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    statistics[t] = result.samples[t].statistic;
  }
  const KsResult ks = ks_test_normal(std::move(statistics));
  result.ks_distance = ks.distance;
  result.ks_pvalue = ks.p_value;
  return result;
}

TypicalValueResult typical_value_experiment(
    const std::vector<std::size_t>& sizes, std::size_t trials,
    SeededSource source, int threads) {
  if (sizes.empty()) {
    throw ConfigError("sizes must be nonempty");
  }
  if (trials == 0) {
    throw ConfigError("trials must be at least 1");
  }

  TypicalValueResult result;
  result.sizes = sizes;
  result.median_log_ratio.resize(sizes.size());
  result.log_det2.resize(sizes.size());

  const EntryModel model = EntryModel::gaussian();
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const std::size_t n = sizes[s];
    const SeededSource size_source = source.block(s);
    std::vector<LogSignedValue> det2(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
      const DenseMatrix a = sample_matrix(model, n, size_source.offset(t));
      det2[t] = log_det_lu(a).squared();
    });

    auto& raw = result.log_det2[s];
    raw.resize(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      raw[t] = det2[t].is_zero() ? kNegInf : det2[t].log_abs;
    }

    const LogSignedValue median = aggregate_trials(det2, Aggregation::kMedian);
    const double log_factorial = std::lgamma(static_cast<double>(n) + 1.0);
    result.median_log_ratio[s] =
        (median.is_zero() ? kNegInf : median.log_abs) - log_factorial;
  }

  const std::set<std::size_t> distinct(sizes.begin(), sizes.end());
  if (distinct.size() >= 2) {
    std::vector<double> x(sizes.size());
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      x[s] = std::log(static_cast<double>(sizes[s]));
    }
    result.fit = least_squares_fit(x, result.median_log_ratio);
  }
  return result;
}

TruncConcentrationResult trunc_concentration_experiment(
    const EntryModel& model, std::size_t n, std::size_t trials,
    double epsilon, SeededSource source, int threads) {
  if (trials < 100) {
    throw ConfigError("concentration experiment requires trials >= 100");
  }
  if (!(epsilon > 0.0)) {
    throw DomainError("epsilon must be strictly positive");
  }

  TruncConcentrationResult result;
  result.statistics.resize(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const DenseMatrix a = sample_matrix(model, n, source.offset(t));
    result.statistics[t] = truncated_log_statistic(a, epsilon);
  });
  result.empirical_std = sample_std(result.statistics);
  result.bound = std::sqrt(static_cast<double>(n)) *
                 std::log(static_cast<double>(n)) / epsilon;
  return result;
}

std::vector<RatioScalingRow> ratio_scaling_experiment(
    const std::vector<std::size_t>& sizes, std::size_t trials,
    SeededSource source, int threads) {
  struct Family {
    const char* name;
    MatrixFamily make;
  };
  const Family families[] = {
      {"all_ones",
       [](std::size_t n, SeededSource) {
         return DenseMatrix::constant(n, n, 1.0);
       }},
      {"uniform_1_2",
       [](std::size_t n, SeededSource s) {
         PhiloxEngine engine(s);
         std::vector<double> entries(n * n);
         for (double& e : entries) e = 1.0 + engine.next_uniform();
         return DenseMatrix(n, n, std::move(entries));
       }},
  };

  std::vector<RatioScalingRow> table;
  table.reserve(2 * sizes.size());
  for (std::size_t f = 0; f < 2; ++f) {
    EstimatorConfig cfg;
    cfg.kind = EstimatorKind::kGodsilGutman;
    cfg.trials = trials;
    cfg.seed = source.block(f * kFamilyPhaseStride);
    cfg.threads = threads;
    std::vector<RatioQuantiles> sweep =
        approximation_ratio_sweep(families[f].make, sizes, trials, cfg);
    for (RatioQuantiles& q : sweep) {
      RatioScalingRow row;
      row.n = q.n;
      row.family = families[f].name;
      row.q50 = q.q50;
      row.q90 = q.q90;
      row.q99 = q.q99;
      row.bound = std::pow(static_cast<double>(q.n), 2.0 / 3.0) *
                  std::log(static_cast<double>(q.n));
      row.trials_zero = q.trials_zero;
      row.abs_log_ratio = std::move(q.abs_log_ratio);
      table.push_back(std::move(row));
    }
  }
  return table;
}

namespace {

const char* route_name(CltRoute route) {
  return route == CltRoute::kDirectMatrix ? "direct" : "chi";
}

const char* kind_name(EntryModelKind kind) {
  switch (kind) {
    case EntryModelKind::kRademacherScaled:
      return "rademacher";
    case EntryModelKind::kGaussianScaled:
      return "gaussian";
    case EntryModelKind::kShiftedBernoulli:
      return "shifted_bernoulli";
  }
  return "?";
}

double require_number(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) {
    throw ConfigError(std::string(what) + " must be a number");
  }
  return v.get<double>();
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw json_parse_error(text, e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!doc.is_object()) {
    throw ParseError("experiment spec must be a JSON object", 1, 1);
  }

  static const std::set<std::string> known = {
      "name", "model", "sizes", "trials", "epsilon",
      "seed", "route", "raw_csv"};
  for (const auto& [key, ignored] : doc.items()) {
    (void)ignored;
    if (!known.count(key)) {
      throw ConfigError("unknown experiment field '" + key + "'");
    }
  }

  ExperimentSpec spec;

  if (!doc.contains("name") || !doc["name"].is_string()) {
    throw ConfigError("experiment spec needs a string 'name'");
  }
  spec.name = doc["name"].get<std::string>();
  static const std::set<std::string> names = {
      "clt", "typical_value", "trunc_concentration", "ratio_scaling"};
  if (!names.count(spec.name)) {
    throw ConfigError("unknown experiment name '" + spec.name + "'");
  }

  if (!doc.contains("sizes") || !doc["sizes"].is_array() ||
      doc["sizes"].empty()) {
    throw ConfigError("experiment spec needs a nonempty 'sizes' array");
  }
  for (const auto& v : doc["sizes"]) {
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
      throw ConfigError("sizes must be positive integers");
    }
    spec.sizes.push_back(static_cast<std::size_t>(v.get<std::int64_t>()));
  }

  if (!doc.contains("trials") || !doc["trials"].is_number_integer()) {
    throw ConfigError("experiment spec needs an integer 'trials'");
  }
  const std::int64_t trials = doc["trials"].get<std::int64_t>();
  if (trials < 30) {
    throw ConfigError("trials must be at least 30 for distributional runs");
  }
  spec.trials = static_cast<std::size_t>(trials);

  spec.seed = {kDefaultSeed, 0};
  if (doc.contains("seed")) {
    const auto& sv = doc["seed"];
    if (!sv.is_number_integer()) {
      throw ConfigError("seed must be an integer");
    }
    if (sv.is_number_unsigned()) {
      spec.seed = {sv.get<std::uint64_t>(), 0};
    } else {
      const std::int64_t s = sv.get<std::int64_t>();
      if (s < 0) {
        throw ConfigError("seed must be nonnegative");
      }
      spec.seed = {static_cast<std::uint64_t>(s), 0};
    }
  }

  if (doc.contains("model")) {
    const auto& m = doc["model"];
    if (!m.is_object() || !m.contains("kind") || !m["kind"].is_string()) {
      throw ConfigError("model needs a string 'kind'");
    }
    for (const auto& [key, ignored] : m.items()) {
      (void)ignored;
      if (key != "kind" && key != "scale" && key != "bias" && key != "shift") {
        throw ConfigError("unknown model field '" + key + "'");
      }
    }
    const std::string kind = m["kind"].get<std::string>();
    const double scale =
        m.contains("scale") ? require_number(m["scale"], "scale") : 1.0;
    const double bias =
        m.contains("bias") ? require_number(m["bias"], "bias") : 0.5;
    const double shift =
        m.contains("shift") ? require_number(m["shift"], "shift") : 0.0;
    if (kind == "rademacher") {
      if (shift != 0.0) {
        throw ConfigError("shift is only valid for shifted_bernoulli");
      }
      spec.model = EntryModel::rademacher(scale, bias);
    } else if (kind == "gaussian") {
      if (shift != 0.0) {
        throw ConfigError("shift is only valid for shifted_bernoulli");
      }
      spec.model = EntryModel::gaussian(scale);
    } else if (kind == "shifted_bernoulli") {
      spec.model = EntryModel::shifted_bernoulli(shift, scale, bias);
    } else {
      throw ConfigError("unknown model kind '" + kind + "'");
    }
  }

  if (doc.contains("epsilon")) {
    const auto& e = doc["epsilon"];
    if (e.is_string()) {
      if (e.get<std::string>() != "paper") {
        throw ConfigError("epsilon must be a number or \"paper\"");
      }
      spec.epsilon_paper_rule = true;
    } else if (e.is_number()) {
      spec.epsilon_paper_rule = false;
      spec.epsilon_value = e.get<double>();
      if (!(spec.epsilon_value > 0.0)) {
        throw ConfigError("epsilon must be strictly positive");
      }
    } else {
      throw ConfigError("epsilon must be a number or \"paper\"");
    }
  }

  if (doc.contains("route")) {
    if (!doc["route"].is_string()) {
      throw ConfigError("route must be \"direct\" or \"chi\"");
    }
    const std::string route = doc["route"].get<std::string>();
    if (route == "direct") {
      spec.route = CltRoute::kDirectMatrix;
    } else if (route == "chi") {
      spec.route = CltRoute::kChiConstruction;
    } else {
      throw ConfigError("route must be \"direct\" or \"chi\"");
    }
  }

  if (doc.contains("raw_csv")) {
    if (!doc["raw_csv"].is_string()) {
      throw ConfigError("raw_csv must be a path string");
    }
    spec.raw_csv = doc["raw_csv"].get<std::string>();
  }

  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open experiment spec: " + path);
  }
  return parse_experiment_spec(in);
}

namespace {

// CSV wants every value spelled out, unlike JSON where non-finite doubles
// become null.
std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == kNegInf) return "-inf";
  return format_double(v);
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open raw output file: " + path);
  }
  return out;
}

double spec_epsilon(const ExperimentSpec& spec, std::size_t n) {
  return spec.epsilon_paper_rule ? default_epsilon(n) : spec.epsilon_value;
}

void write_spec_echo(JsonWriter& w, const ExperimentSpec& spec) {
  w.key("spec");
  w.begin_object();
  w.key("sizes");
  w.begin_array();
  for (std::size_t n : spec.sizes) {
    w.value(static_cast<std::uint64_t>(n));
  }
  w.end_array();
  w.field("trials", static_cast<std::uint64_t>(spec.trials));
  w.key("model");
  w.begin_object();
  w.field("kind", kind_name(spec.model.kind));
  w.end_object();
  if (spec.epsilon_paper_rule) {
    w.field("epsilon", "paper");
  } else {
    w.field("epsilon", spec.epsilon_value);
  }
  if (spec.name == "clt") {
    w.field("route", route_name(spec.route));
  }
  w.end_object();
}

void run_clt(const ExperimentSpec& spec, int threads, JsonWriter& w) {
  std::vector<CltResult> results;
  results.reserve(spec.sizes.size());
  for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
    results.push_back(clt_experiment(spec.sizes[s], spec.trials, spec.route,
                                     spec.seed.block(s), threads));
  }

  w.key("per_size_results");
  w.begin_array();
  for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
    w.begin_object();
    w.field("n", static_cast<std::uint64_t>(spec.sizes[s]));
    w.field("route", route_name(spec.route));
    w.field("ks_distance", results[s].ks_distance);
    w.field("ks_pvalue", results[s].ks_pvalue);
    w.end_object();
  }
  w.end_array();

  if (!spec.raw_csv.empty()) {
    std::ofstream csv = open_csv(spec.raw_csv);
    csv << "n,route,trial,statistic\n";
    for (const CltResult& r : results) {
      for (std::size_t t = 0; t < r.samples.size(); ++t) {
        csv << r.samples[t].n << ',' << route_name(r.samples[t].route) << ','
            << t << ',' << csv_double(r.samples[t].statistic) << '\n';
      }
    }
  }
}

void run_typical_value(const ExperimentSpec& spec, int threads,
                       JsonWriter& w) {
  const TypicalValueResult result =
      typical_value_experiment(spec.sizes, spec.trials, spec.seed, threads);

  w.key("per_size_results");
  w.begin_array();
  for (std::size_t s = 0; s < result.sizes.size(); ++s) {
    w.begin_object();
    w.field("n", static_cast<std::uint64_t>(result.sizes[s]));
    w.field("median_log_ratio", result.median_log_ratio[s]);
    w.end_object();
  }
  w.end_array();
  w.key("fit");
  w.begin_object();
  w.field("slope", result.fit.slope);
  w.field("intercept", result.fit.intercept);
  w.end_object();

  if (!spec.raw_csv.empty()) {
    std::ofstream csv = open_csv(spec.raw_csv);
    csv << "n,trial,log_det2\n";
    for (std::size_t s = 0; s < result.sizes.size(); ++s) {
      for (std::size_t t = 0; t < result.log_det2[s].size(); ++t) {
        csv << result.sizes[s] << ',' << t << ','
            << csv_double(result.log_det2[s][t]) << '\n';
      }
    }
  }
}

void run_trunc_concentration(const ExperimentSpec& spec, int threads,
                             JsonWriter& w) {
  std::vector<TruncConcentrationResult> results;
  results.reserve(spec.sizes.size());
  for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
    results.push_back(trunc_concentration_experiment(
        spec.model, spec.sizes[s], spec.trials, spec_epsilon(spec, spec.sizes[s]),
        spec.seed.block(s), threads));
  }

  w.key("per_size_results");
  w.begin_array();
  for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
    w.begin_object();
    w.field("n", static_cast<std::uint64_t>(spec.sizes[s]));
    w.field("epsilon", spec_epsilon(spec, spec.sizes[s]));
    w.field("empirical_std", results[s].empirical_std);
    w.field("bound", results[s].bound);
    w.end_object();
  }
  w.end_array();

  if (!spec.raw_csv.empty()) {
    std::ofstream csv = open_csv(spec.raw_csv);
    csv << "n,trial,truncated_log\n";
    for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
      for (std::size_t t = 0; t < results[s].statistics.size(); ++t) {
        csv << spec.sizes[s] << ',' << t << ','
            << csv_double(results[s].statistics[t]) << '\n';
      }
    }
  }
}

void run_ratio_scaling(const ExperimentSpec& spec, int threads,
                       JsonWriter& w) {
  const std::vector<RatioScalingRow> table =
      ratio_scaling_experiment(spec.sizes, spec.trials, spec.seed, threads);

  w.key("per_size_results");
  w.begin_array();
  for (const RatioScalingRow& row : table) {
    w.begin_object();
    w.field("n", static_cast<std::uint64_t>(row.n));
    w.field("family", row.family);
    w.field("q50", row.q50);
    w.field("q90", row.q90);
    w.field("q99", row.q99);
    w.field("bound", row.bound);
    w.field("trials_zero", static_cast<std::uint64_t>(row.trials_zero));
    w.end_object();
  }
  w.end_array();

  if (!spec.raw_csv.empty()) {
    std::ofstream csv = open_csv(spec.raw_csv);
    csv << "n,family,trial,abs_log_ratio\n";
    for (const RatioScalingRow& row : table) {
      for (std::size_t t = 0; t < row.abs_log_ratio.size(); ++t) {
        csv << row.n << ',' << row.family << ',' << t << ','
            << csv_double(row.abs_log_ratio[t]) << '\n';
      }
    }
  }
}

}  // namespace

void run_experiment(const ExperimentSpec& spec, int threads,
                    std::ostream& report_out,
                    const std::string& command_line) {
  JsonWriter w(report_out);
  w.begin_object();
  w.field("name", spec.name);
  write_spec_echo(w, spec);

  if (spec.name == "clt") {
    run_clt(spec, threads, w);
  } else if (spec.name == "typical_value") {
    run_typical_value(spec, threads, w);
  } else if (spec.name == "trunc_concentration") {
    run_trunc_concentration(spec, threads, w);
  } else if (spec.name == "ratio_scaling") {
    run_ratio_scaling(spec, threads, w);
  } else {
    throw ConfigError("unknown experiment name '" + spec.name + "'");
  }

  w.field("seed", spec.seed.seed);
  if (!command_line.empty()) {
    w.key("provenance");
    w.begin_object();
    w.field("seed", spec.seed.seed);
    w.field("version", kVersion);
    w.field("command_line", command_line);
    w.end_object();
  }
  w.end_object();
  w.finish();
}

}  // namespace detperm
