#include "detperm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "detperm/errors.hpp"

namespace detperm {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Wichura, Algorithm AS 241, PPND16.
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("inverse_normal_cdf requires p in (0, 1)");
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) *
                 r +
             4.5921953931549871457e4) *
                r +
            1.3731693765509461125e4) *
               r +
           1.9715909503065514427e3) *
              r +
          1.3314166789178437745e2) *
             r +
         3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) *
                 r +
             2.1213794301586595867e4) *
                r +
            5.3941960214247511077e3) *
               r +
           6.8718700749205790830e2) *
              r +
          4.2313330701600911252e1) *
             r +
         1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double z;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e0) *
                r +
            3.64784832476320460504e0) *
               r +
           5.76949722146069140550e0) *
              r +
          4.63033784615654529590e0) *
             r +
         1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e0) *
              r +
          2.05319162663775882187e0) *
             r +
         1.0);
    z = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e0) *
              r +
          5.46378491116411436990e0) *
             r +
         6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1)) *
             r +
         1.0;
    z = num / den;
  }
  return (q < 0.0) ? -z : z;
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  // The alternating series converges fast for lambda above ~1; below that
  // the Jacobi-theta form is used instead.
  if (lambda < 1.18) {
    const double t = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
    const double cdf = std::sqrt(2.0 * M_PI) / lambda *
                       (t + std::pow(t, 9.0) + std::pow(t, 25.0) +
                        std::pow(t, 49.0));
    return 1.0 - cdf;
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw DomainError("ks_test requires at least one sample");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return {d, kolmogorov_q(std::sqrt(n) * d)};
}

KsResult ks_test_normal(std::vector<double> samples) {
  return ks_test(std::move(samples), [](double x) { return normal_cdf(x); });
}

double two_sample_ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw DomainError("two_sample_ks_distance requires nonempty samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    d = std::max(d, std::fabs(static_cast<double>(ia) / na -
                              static_cast<double>(ib) / nb));
  }
  return d;
}

KsResult two_sample_ks_test(std::vector<double> a, std::vector<double> b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double d = two_sample_ks_distance(std::move(a), std::move(b));
  const double neff = na * nb / (na + nb);
  return {d, kolmogorov_q(std::sqrt(neff) * d)};
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw DomainError("quantile of empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("quantile level must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return values[rank - 1];
}

double mean(std::span<const double> values) {
  if (values.empty()) throw DomainError("mean of empty sample");
  NeumaierSum s;
  for (double v : values) s.add(v);
  return s.value() / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) {
    throw DomainError("sample_std requires at least two samples");
  }
  const double m = mean(values);
  NeumaierSum s;
  for (double v : values) s.add((v - m) * (v - m));
  return std::sqrt(s.value() / static_cast<double>(values.size() - 1));
}

LinearFit least_squares_fit(std::span<const double> x,
                            std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("least_squares_fit requires two or more (x, y) pairs");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw DomainError("least_squares_fit requires non-constant x");
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace detperm
