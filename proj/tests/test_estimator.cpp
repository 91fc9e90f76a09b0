#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include <doctest.h>

#include "detperm/errors.hpp"
#include "detperm/estimator.hpp"
#include "detperm/linalg.hpp"
#include "detperm/matrix.hpp"
#include "detperm/rng.hpp"

using namespace detperm;

namespace {

LogSignedValue lv(double v) { return LogSignedValue::from_value(v); }

}  // namespace

TEST_CASE("sign-lift det^2 distribution for the all-ones 3x3, all 512 cases") {
  // Enumerating every sign assignment: det^2 takes only the values 0 and 16
  // (determinants of odd-order sign matrices are even), with frequencies
  // 320 and 192. The mean is exactly 16 * 192 / 512 = 6 = 3!.
  std::map<long, int> freq;
  for (std::uint32_t mask = 0; mask < 512; ++mask) {
    std::vector<double> entries(9);
    for (std::size_t c = 0; c < 9; ++c) {
      entries[c] = ((mask >> c) & 1u) ? 1.0 : -1.0;
    }
    const auto det2 = log_det_lu(DenseMatrix(3, 3, entries)).squared();
    ++freq[std::lround(det2.to_double())];
  }
  REQUIRE(freq.size() == 2);
  CHECK(freq[0] == 320);
  CHECK(freq[16] == 192);
}

TEST_CASE("exhaustive sign average equals the permanent") {
  const auto one = unbiasedness_exhaustive(DenseMatrix(1, 1, {5.0}));
  CHECK(one.first == doctest::Approx(one.second).epsilon(1e-12));
  CHECK(one.second == 5.0);

  const auto two = unbiasedness_exhaustive(DenseMatrix(2, 2, {1, 2, 3, 4}));
  CHECK(two.second == 10.0);
  CHECK(two.first == doctest::Approx(10.0).epsilon(1e-12));

  const auto three = unbiasedness_exhaustive(DenseMatrix::constant(3, 3, 1.0));
  CHECK(three.second == 6.0);
  CHECK(three.first == doctest::Approx(6.0).epsilon(1e-12));

  const auto four = unbiasedness_exhaustive(DenseMatrix::constant(4, 4, 1.0));
  CHECK(four.second == 24.0);
  CHECK(four.first == doctest::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("exhaustive check rejects unsupported input") {
  CHECK_THROWS_AS(unbiasedness_exhaustive(DenseMatrix::constant(5, 5, 1.0)),
                  SizeError);
  CHECK_THROWS_AS(unbiasedness_exhaustive(DenseMatrix(2, 2, {1, -1, 1, 1})),
                  DomainError);
  CHECK_THROWS_AS(unbiasedness_exhaustive(DenseMatrix(1, 2, {1, 1})),
                  DomainError);
}

TEST_CASE("aggregation of per-trial values") {
  const std::vector<LogSignedValue> two = {lv(4.0), lv(16.0)};
  CHECK(aggregate_trials(two, Aggregation::kMean).to_double() ==
        doctest::Approx(10.0).epsilon(1e-13));
  // Even count: median averages the two central values in linear scale.
  CHECK(aggregate_trials(two, Aggregation::kMedian).to_double() ==
        doctest::Approx(10.0).epsilon(1e-13));

  const std::vector<LogSignedValue> with_zero = {LogSignedValue::zero(),
                                                 lv(8.0)};
  CHECK(aggregate_trials(with_zero, Aggregation::kMean).to_double() ==
        doctest::Approx(4.0).epsilon(1e-13));

  const std::vector<LogSignedValue> odd = {lv(100.0), lv(1.0), lv(4.0)};
  CHECK(aggregate_trials(odd, Aggregation::kMedian).to_double() ==
        doctest::Approx(4.0).epsilon(1e-13));

  const std::vector<LogSignedValue> half_zero = {
      LogSignedValue::zero(), LogSignedValue::zero(), lv(4.0), lv(16.0)};
  CHECK(aggregate_trials(half_zero, Aggregation::kMedian).to_double() ==
        doctest::Approx(2.0).epsilon(1e-13));

  const std::vector<LogSignedValue> zeros = {LogSignedValue::zero(),
                                             LogSignedValue::zero()};
  CHECK(aggregate_trials(zeros, Aggregation::kMean).is_zero());
  CHECK(aggregate_trials(zeros, Aggregation::kMedian).is_zero());

  const std::vector<LogSignedValue> single = {lv(7.0)};
  CHECK(aggregate_trials(single, Aggregation::kSingle).to_double() ==
        doctest::Approx(7.0));
  CHECK_THROWS_AS(aggregate_trials(two, Aggregation::kSingle), ConfigError);
  CHECK_THROWS_AS(
      aggregate_trials(std::vector<LogSignedValue>{}, Aggregation::kMean),
      ConfigError);
}

TEST_CASE("estimator on the identity is exact every trial") {
  EstimatorConfig cfg;
  cfg.trials = 16;
  cfg.seed = SeededSource{5, 0};
  const auto report = estimate_permanent(DenseMatrix::identity(2), cfg);
  CHECK(report.estimate.sign == 1);
  CHECK(report.estimate.log_abs == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(report.trials_zero == 0);
  REQUIRE(report.exact.has_value());
  CHECK(*report.exact->exact_small == 1.0);
  REQUIRE(report.log_ratio.has_value());
  CHECK(*report.log_ratio == doctest::Approx(0.0).epsilon(1e-14));
  for (const auto& t : report.per_trial) {
    CHECK(t.log_abs == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("estimator configuration validation") {
  EstimatorConfig cfg;
  cfg.trials = 0;
  CHECK_THROWS_AS(estimate_permanent(DenseMatrix::identity(2), cfg),
                  ConfigError);
  cfg.trials = 3;
  cfg.aggregation = Aggregation::kSingle;
  CHECK_THROWS_AS(estimate_permanent(DenseMatrix::identity(2), cfg),
                  ConfigError);
  cfg = EstimatorConfig{};
  CHECK_THROWS_AS(estimate_permanent(DenseMatrix(2, 2, {1, -1, 1, 1}), cfg),
                  DomainError);
  CHECK_THROWS_AS(estimate_permanent(DenseMatrix(2, 3), cfg), DomainError);
}

TEST_CASE("sample mean tracks the permanent on the all-ones matrix") {
  const DenseMatrix m = DenseMatrix::constant(4, 4, 1.0);
  EstimatorConfig cfg;
  cfg.trials = 2000;
  cfg.seed = SeededSource{2718, 0};
  cfg.threads = 4;

  for (EstimatorKind kind :
       {EstimatorKind::kGodsilGutman, EstimatorKind::kBarvinok}) {
    cfg.kind = kind;
    const auto report = estimate_permanent(m, cfg);
    REQUIRE(report.log_ratio.has_value());
    // E det^2 = per = 24; 2000 trials put the sample mean well within
    // a factor 1.6 of it.
    CHECK(std::fabs(*report.log_ratio) < 0.5);
  }
}

TEST_CASE("estimates scale as lambda^n when the matrix is scaled") {
  PhiloxEngine engine(SeededSource{31, 0});
  std::vector<double> entries(25);
  for (double& v : entries) v = engine.next_uniform();
  const DenseMatrix m(5, 5, entries);
  std::vector<double> scaled_entries = entries;
  for (double& v : scaled_entries) v *= 3.0;
  const DenseMatrix scaled(5, 5, scaled_entries);

  EstimatorConfig cfg;
  cfg.trials = 40;
  cfg.seed = SeededSource{100, 0};
  const auto base = estimate_permanent(m, cfg);
  const auto big = estimate_permanent(scaled, cfg);
  CHECK(big.estimate.log_abs - base.estimate.log_abs ==
        doctest::Approx(5.0 * std::log(3.0)).epsilon(1e-10));
}

TEST_CASE("reports are identical for every thread count") {
  const DenseMatrix m = DenseMatrix::constant(6, 6, 1.0);
  EstimatorConfig cfg;
  cfg.trials = 64;
  cfg.seed = SeededSource{404, 0};

  cfg.threads = 1;
  const auto serial = estimate_permanent(m, cfg);
  cfg.threads = 7;
  const auto parallel = estimate_permanent(m, cfg);

  CHECK(serial.estimate.log_abs == parallel.estimate.log_abs);
  CHECK(serial.trials_zero == parallel.trials_zero);
  REQUIRE(serial.per_trial.size() == parallel.per_trial.size());
  for (std::size_t t = 0; t < serial.per_trial.size(); ++t) {
    CHECK(serial.per_trial[t].sign == parallel.per_trial[t].sign);
    CHECK(serial.per_trial[t].log_abs == parallel.per_trial[t].log_abs);
  }
}

TEST_CASE("ratio sweep on the all-ones family") {
  const MatrixFamily family = [](std::size_t n, SeededSource) {
    return DenseMatrix::constant(n, n, 1.0);
  };
  EstimatorConfig cfg;
  cfg.seed = SeededSource{55, 0};
  const auto table = approximation_ratio_sweep(family, {3}, 64, cfg);
  REQUIRE(table.size() == 1);
  const auto& row = table[0];
  CHECK(row.n == 3);
  REQUIRE(row.abs_log_ratio.size() == 64);

  // per = 6 and det^2 is 0 or 16, so every finite sample is log(16/6).
  const double expected = std::log(16.0 / 6.0);
  std::size_t infinite = 0;
  for (double r : row.abs_log_ratio) {
    if (std::isinf(r)) {
      ++infinite;
    } else {
      CHECK(r == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  CHECK(infinite == row.trials_zero);
  CHECK(infinite > 0);     // P(singular) = 320/512 makes zero hits certain
  CHECK(infinite < 64);    // and so are nonzero hits
  CHECK(row.q50 <= row.q90);
  CHECK(row.q90 <= row.q99);
}

TEST_CASE("ratio sweep is deterministic in the seed") {
  const MatrixFamily family = [](std::size_t n, SeededSource source) {
    PhiloxEngine engine(source);
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = 1.0 + engine.next_uniform();
    }
    return m;
  };
  EstimatorConfig cfg;
  cfg.seed = SeededSource{77, 0};
  const auto a = approximation_ratio_sweep(family, {4, 5}, 20, cfg);
  const auto b = approximation_ratio_sweep(family, {4, 5}, 20, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t s = 0; s < a.size(); ++s) {
    CHECK(a[s].abs_log_ratio == b[s].abs_log_ratio);
    CHECK(a[s].q90 == b[s].q90);
  }
  cfg.seed = SeededSource{78, 0};
  const auto c = approximation_ratio_sweep(family, {4, 5}, 20, cfg);
  CHECK_FALSE(a[0].abs_log_ratio == c[0].abs_log_ratio);
}

TEST_CASE("ratio sweep rejects degenerate input") {
  const MatrixFamily zero_family = [](std::size_t n, SeededSource) {
    return DenseMatrix::constant(n, n, 0.0);
  };
  EstimatorConfig cfg;
  CHECK_THROWS_AS(approximation_ratio_sweep(zero_family, {3}, 10, cfg),
                  DomainError);
  const MatrixFamily ones = [](std::size_t n, SeededSource) {
    return DenseMatrix::constant(n, n, 1.0);
  };
  CHECK_THROWS_AS(approximation_ratio_sweep(ones, {3}, 0, cfg), ConfigError);
  CHECK_THROWS_AS(approximation_ratio_sweep(ones, {31}, 5, cfg), SizeError);
}
