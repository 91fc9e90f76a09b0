#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace detperm {

/// Compensated accumulator (Neumaier variant of Kahan summation). Used
/// wherever alternating-sign sums cancel heavily.
class NeumaierSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      comp_ += (sum_ - t) + value;
    } else {
      comp_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile function (Wichura's PPND16 rational
/// approximation, |error| ~ 1e-16). Requires p strictly inside (0, 1).
double inverse_normal_cdf(double p);

/// Tail function Q(lambda) of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct KsResult {
  double distance = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov statistic of `samples` against the given
/// CDF, with the asymptotic p-value Q(sqrt(n) * D).
KsResult ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf);

/// ks_test against the standard normal CDF.
KsResult ks_test_normal(std::vector<double> samples);

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double two_sample_ks_distance(std::vector<double> a, std::vector<double> b);

/// Two-sample KS with asymptotic p-value, effective size n_a n_b / (n_a + n_b).
KsResult two_sample_ks_test(std::vector<double> a, std::vector<double> b);

/// Empirical quantile, inverse-CDF convention: the order statistic with
/// 1-based rank ceil(q * n), clamped to [1, n]. q must lie in [0, 1].
double quantile(std::vector<double> values, double q);

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 divisor).
double sample_std(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit least_squares_fit(std::span<const double> x,
                            std::span<const double> y);

}  // namespace detperm
