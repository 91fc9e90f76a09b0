#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "detperm/errors.hpp"
#include "detperm/stats.hpp"

using namespace detperm;

TEST_CASE("compensated summation survives catastrophic cancellation") {
  NeumaierSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);

  NeumaierSum t;
  for (int i = 0; i < 10000; ++i) t.add(0.1);
  CHECK(t.value() == doctest::Approx(1000.0).epsilon(1e-14));
}

TEST_CASE("normal cdf and quantile invert each other") {
  for (double p : {0.001, 0.1, 0.25, 0.5, 0.9, 0.999}) {
    CHECK(normal_cdf(inverse_normal_cdf(p)) ==
          doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
}

TEST_CASE("kolmogorov tail function hits known anchors") {
  // Q at the distribution's median is 1/2 (median ~0.82757).
  CHECK(kolmogorov_q(0.8275735551899077) == doctest::Approx(0.5).epsilon(1e-6));
  // Classic critical point: Q(1.3581) ~ 0.05.
  CHECK(kolmogorov_q(1.3581015157406195) ==
        doctest::Approx(0.05).epsilon(1e-4));
  CHECK(kolmogorov_q(0.0) == 1.0);
  CHECK(kolmogorov_q(1e-3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kolmogorov_q(10.0) < 1e-80);
  // The two evaluation branches meet continuously at the switch point.
  // Probe points straddle 1.18 closely enough that the function's own slope
  // (about -0.58) contributes ~1e-12, far below the tolerance.
  CHECK(kolmogorov_q(1.18 - 1e-12) ==
        doctest::Approx(kolmogorov_q(1.18 + 1e-12)).epsilon(1e-9));
  // Value at the switch point, frozen from an independent double-precision
  // evaluation of the alternating series.
  CHECK(kolmogorov_q(1.18) ==
        doctest::Approx(0.12345380942976571).epsilon(1e-12));
}

TEST_CASE("one-sample ks statistic is exact on a tiny case") {
  // Samples {0.25, 0.75} against Uniform(0,1): D = max over the usual
  // before/after gaps = 0.25.
  const auto uniform_cdf = [](double x) { return x; };
  const KsResult ks = ks_test({0.25, 0.75}, uniform_cdf);
  CHECK(ks.distance == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("one-sample ks accepts its own null") {
  // Deterministic uniform grid placed at plotting positions.
  std::vector<double> grid(1000);
  for (int i = 0; i < 1000; ++i) grid[i] = (i + 0.5) / 1000.0;
  const auto uniform_cdf = [](double x) { return x; };
  const KsResult ks = ks_test(grid, uniform_cdf);
  CHECK(ks.distance < 0.001);
  CHECK(ks.p_value > 0.99);
}

TEST_CASE("two-sample ks distance on hand-checked cases") {
  CHECK(two_sample_ks_distance({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) ==
        doctest::Approx(0.0));
  // Disjoint supports: distance 1.
  CHECK(two_sample_ks_distance({1.0, 2.0}, {5.0, 6.0}) ==
        doctest::Approx(1.0));
  // {1,2} vs {1.5, 2.5}: max gap 1/2.
  CHECK(two_sample_ks_distance({1.0, 2.0}, {1.5, 2.5}) ==
        doctest::Approx(0.5));
}

TEST_CASE("two-sample ks p-value is calibrated for equal distributions") {
  std::vector<double> a(800), b(900);
  for (int i = 0; i < 800; ++i) a[i] = (i + 0.5) / 800.0;
  for (int i = 0; i < 900; ++i) b[i] = (i + 0.5) / 900.0;
  const KsResult ks = two_sample_ks_test(a, b);
  CHECK(ks.distance < 0.01);
  CHECK(ks.p_value > 0.9);
}

TEST_CASE("quantile uses the inverse-cdf rank convention") {
  const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 0.25) == 1.0);
  CHECK(quantile(v, 0.26) == 2.0);
  CHECK(quantile(v, 0.5) == 2.0);
  CHECK(quantile(v, 0.75) == 3.0);
  CHECK(quantile(v, 0.99) == 4.0);
  CHECK(quantile(v, 1.0) == 4.0);
  CHECK(quantile({7.0}, 0.5) == 7.0);
}

TEST_CASE("quantile handles infinite samples") {
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<double> v{1.0, 2.0, inf, inf};
  CHECK(quantile(v, 0.5) == 2.0);
  CHECK(quantile(v, 0.99) == inf);
}

TEST_CASE("mean and sample standard deviation") {
  const std::vector<double> v{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  CHECK(mean(v) == doctest::Approx(5.0));
  // Sum of squared deviations = 32, n-1 = 7.
  CHECK(sample_std(v) == doctest::Approx(std::sqrt(32.0 / 7.0)).epsilon(1e-12));
}

TEST_CASE("least squares recovers an exact line") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y{3.0, 5.0, 7.0, 9.0};
  const LinearFit fit = least_squares_fit(x, y);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("least squares rejects degenerate abscissae") {
  CHECK_THROWS_AS(least_squares_fit(std::vector<double>{2.0, 2.0},
                                    std::vector<double>{1.0, 2.0}),
                  DomainError);
}
