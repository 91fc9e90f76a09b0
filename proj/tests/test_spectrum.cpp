#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include <doctest.h>

#include "detperm/errors.hpp"
#include "detperm/linalg.hpp"
#include "detperm/matrix.hpp"
#include "detperm/rng.hpp"
#include "detperm/sampling.hpp"
#include "detperm/spectrum.hpp"

using namespace detperm;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("default epsilon is the sixth root of n") {
  CHECK(default_epsilon(1) == doctest::Approx(1.0));
  CHECK(default_epsilon(64) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(default_epsilon(100) ==
        doctest::Approx(std::pow(100.0, 1.0 / 6.0)).epsilon(1e-14));
}

TEST_CASE("split on diagonal matrices matches hand computation") {
  const auto id = spectrum_split(DenseMatrix::identity(3), 0.5);
  CHECK(id.log_det_trunc == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(id.log_det_small == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(id.s_eps == 0);
  CHECK(id.sigma_min == doctest::Approx(1.0));

  // diag(2, 0.1), eps = 0.5: sigma 0.1 is clipped up to 0.5 in the
  // truncated part and contributes log(0.1/0.5) to the small part.
  const auto d = spectrum_split(DenseMatrix::diagonal({2.0, 0.1}), 0.5);
  CHECK(d.sigma.front() == doctest::Approx(0.1));
  CHECK(d.sigma.back() == doctest::Approx(2.0));
  CHECK(d.log_det_trunc ==
        doctest::Approx(std::log(0.5) + std::log(2.0)).epsilon(1e-13));
  CHECK(d.log_det_small == doctest::Approx(std::log(0.2)).epsilon(1e-13));
  CHECK(d.s_eps == 1);
  // The two parts reassemble log|det| = log 0.2.
  CHECK(d.log_det_trunc + d.log_det_small ==
        doctest::Approx(std::log(0.2)).epsilon(1e-13));
}

TEST_CASE("split handles exactly singular input") {
  const auto z = spectrum_split(DenseMatrix::constant(3, 3, 0.0), 1.0);
  CHECK(z.log_det_trunc == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(z.log_det_small == -kInf);
  CHECK(z.s_eps == 3);
  CHECK(z.sigma_min == 0.0);

  const auto ones = spectrum_split(DenseMatrix::constant(2, 2, 1.0), 1.0);
  CHECK(ones.log_det_small == -kInf);
  CHECK(ones.s_eps >= 1);
}

TEST_CASE("split input validation") {
  CHECK_THROWS_AS(spectrum_split(DenseMatrix(2, 3), 1.0), DomainError);
  CHECK_THROWS_AS(spectrum_split(DenseMatrix::identity(2), 0.0), DomainError);
  CHECK_THROWS_AS(spectrum_split(DenseMatrix::identity(2), -1.0), DomainError);
}

TEST_CASE("split reassembles the determinant on random matrices") {
  PhiloxEngine engine(SeededSource{61, 0});
  std::vector<double> entries(100 * 100);
  for (double& v : entries) v = engine.next_normal();
  const DenseMatrix a(100, 100, entries);

  const auto lu = log_det_lu(a);
  REQUIRE(lu.sign != 0);
  const auto s = spectrum_split(a, default_epsilon(100));
  CHECK(s.log_det_trunc + s.log_det_small ==
        doctest::Approx(lu.log_abs).epsilon(1e-9));
  CHECK(s.log_det_small <= 0.0);
}

TEST_CASE("truncated statistic on hand-checked cases") {
  CHECK(truncated_log_statistic(DenseMatrix::constant(3, 3, 0.0), 1.0) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(truncated_log_statistic(DenseMatrix::identity(2), 2.0) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-13));
  CHECK(truncated_log_statistic(DenseMatrix::diagonal({10.0, 10.0}), 1.0) ==
        doctest::Approx(std::log(100.0)).epsilon(1e-13));
}

TEST_CASE("truncated statistic is monotone in epsilon") {
  const DenseMatrix a =
      sample_matrix(EntryModel::gaussian(), 20, SeededSource{9, 0});
  const double t_half = truncated_log_statistic(a, 0.5);
  const double t_one = truncated_log_statistic(a, 1.0);
  const double t_two = truncated_log_statistic(a, 2.0);
  CHECK(t_half <= t_one);
  CHECK(t_one <= t_two);
  CHECK(t_half < t_two);
}

TEST_CASE("small-part lower bound holds and is tight for one small sigma") {
  const auto tight = detsmall_bound_check(DenseMatrix::diagonal({2.0, 0.1}), 0.5);
  CHECK(tight.first == doctest::Approx(std::log(0.2)).epsilon(1e-13));
  CHECK(tight.second == doctest::Approx(tight.first).epsilon(1e-13));

  PhiloxEngine engine(SeededSource{62, 0});
  std::vector<double> entries(60 * 60);
  for (double& v : entries) v = engine.next_normal();
  const auto loose = detsmall_bound_check(DenseMatrix(60, 60, entries),
                                          default_epsilon(60));
  CHECK(loose.first <= 0.0);
  CHECK(loose.first >= loose.second);

  const auto singular =
      detsmall_bound_check(DenseMatrix::constant(2, 2, 1.0), 1.0);
  CHECK(singular.first == -kInf);
  CHECK(singular.second == -kInf);
}

TEST_CASE("sign matrices of order two are singular in half of all cases") {
  std::size_t singular = 0;
  for (std::uint32_t mask = 0; mask < 16; ++mask) {
    std::vector<double> entries(4);
    for (std::size_t c = 0; c < 4; ++c) {
      entries[c] = ((mask >> c) & 1u) ? 1.0 : -1.0;
    }
    if (log_det_lu(DenseMatrix(2, 2, entries)).is_zero()) ++singular;
  }
  CHECK(singular == 8);
}

TEST_CASE("smallest-singular-value survey") {
  // 1 x 1 sign matrices always have sigma_min exactly 1.
  const auto tiny = sigma_min_survey(EntryModel::rademacher(), 1, 20, 2.0,
                                     SeededSource{13, 0});
  CHECK(tiny.min_sigma_min == doctest::Approx(1.0));
  CHECK(tiny.below_floor == 0);

  const auto a = sigma_min_survey(EntryModel::gaussian(), 12, 40, 2.0,
                                  SeededSource{14, 0}, 1);
  const auto b = sigma_min_survey(EntryModel::gaussian(), 12, 40, 2.0,
                                  SeededSource{14, 0}, 4);
  CHECK(a.min_sigma_min == b.min_sigma_min);
  CHECK(a.below_floor == b.below_floor);
  CHECK(a.min_sigma_min > 0.0);

  CHECK_THROWS_AS(
      sigma_min_survey(EntryModel::gaussian(), 5, 0, 2.0, SeededSource{0, 0}),
      ConfigError);
}

TEST_CASE("clustered small singular values are rare at moderate size") {
  const std::size_t hits = small_sv_count_survey(
      EntryModel::gaussian(), 10, 2, 30, 0.1, SeededSource{15, 0});
  CHECK(hits == 0);

  const std::size_t again = small_sv_count_survey(
      EntryModel::gaussian(), 10, 2, 30, 0.1, SeededSource{15, 0}, 4);
  CHECK(again == hits);

  CHECK_THROWS_AS(small_sv_count_survey(EntryModel::gaussian(), 10, 0, 30, 0.1,
                                        SeededSource{0, 0}),
                  DomainError);
  CHECK_THROWS_AS(small_sv_count_survey(EntryModel::gaussian(), 10, 6, 30, 0.1,
                                        SeededSource{0, 0}),
                  DomainError);
  CHECK_THROWS_AS(small_sv_count_survey(EntryModel::gaussian(), 10, 2, 0, 0.1,
                                        SeededSource{0, 0}),
                  ConfigError);
}
