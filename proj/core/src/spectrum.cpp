#include "detperm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "detperm/errors.hpp"
#include "detperm/linalg.hpp"
#include "detperm/parallel.hpp"
#include "detperm/stats.hpp"

namespace detperm {

double default_epsilon(std::size_t n) {
  return std::pow(static_cast<double>(n), 1.0 / 6.0);
}

SpectrumSummary spectrum_split(const DenseMatrix& a, double epsilon) {
  if (!a.is_square()) {
    throw DomainError("spectrum split requires a square matrix");
  }
  if (!(epsilon > 0.0)) {
    throw DomainError("epsilon must be strictly positive");
  }
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const double log_eps = std::log(epsilon);

  SpectrumSummary s;
  s.sigma = singular_values(a);
  s.epsilon = epsilon;
  s.sigma_min = s.sigma.front();

  NeumaierSum trunc;
  NeumaierSum small;
  bool small_hit_zero = false;
  for (double sigma : s.sigma) {
    if (sigma <= epsilon) ++s.s_eps;
    const double log_sigma = sigma > 0.0 ? std::log(sigma) : neg_inf;
    // Per squared singular value: max{2 log eps, 2 log sigma} goes to the
    // truncated part, min{2 log sigma - 2 log eps, 0} to the small part;
    // halving the sums turns sigma^2 sums into the |det| scale.
    trunc.add(std::max(log_eps, log_sigma));
    if (log_sigma == neg_inf) {
      small_hit_zero = true;
    } else {
      small.add(std::min(log_sigma - log_eps, 0.0));
    }
  }
  s.log_det_trunc = trunc.value();
  s.log_det_small = small_hit_zero ? neg_inf : small.value();
  return s;
}

double truncated_log_statistic(const DenseMatrix& a, double epsilon) {
  return spectrum_split(a, epsilon).log_det_trunc;
}

std::pair<double, double> detsmall_bound_check(const DenseMatrix& a,
                                               double epsilon) {
  const SpectrumSummary s = spectrum_split(a, epsilon);
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double rhs = 0.0;
  if (s.s_eps > 0) {
    const double log_ratio =
        s.sigma_min > 0.0 ? std::log(s.sigma_min / epsilon) : neg_inf;
    rhs = static_cast<double>(s.s_eps) * std::min(0.0, log_ratio);
  }
  return {s.log_det_small, rhs};
}

SigmaMinSurvey sigma_min_survey(const EntryModel& model, std::size_t n,
                                std::size_t trials, double floor_exponent,
                                SeededSource source, int threads) {
  if (trials == 0) throw ConfigError("trials must be at least 1");
  std::vector<double> minima(trials, 0.0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const DenseMatrix a = sample_matrix(model, n, source.offset(t));
    minima[t] = singular_values(a).front();
  });

  SigmaMinSurvey out;
  out.min_sigma_min = *std::min_element(minima.begin(), minima.end());
  const double floor =
      std::pow(static_cast<double>(n), -floor_exponent);
  for (double m : minima) {
    if (m < floor) ++out.below_floor;
  }
  return out;
}

std::size_t small_sv_count_survey(const EntryModel& model, std::size_t n,
                                  std::size_t r, std::size_t trials,
                                  double c_bound, SeededSource source,
                                  int threads) {
  if (r == 0 || 2 * r > n) {
    throw DomainError("small_sv_count_survey requires 1 <= 2r <= n");
  }
  if (trials == 0) throw ConfigError("trials must be at least 1");
  const double threshold =
      static_cast<double>(r) * c_bound * c_bound /
      (2.0 * std::sqrt(static_cast<double>(n - r)));

  std::vector<char> hit(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const DenseMatrix a = sample_matrix(model, n, source.offset(t));
    const std::vector<double> sigma = singular_values(a);
    hit[t] = sigma[2 * r - 1] <= threshold ? 1 : 0;
  });
  std::size_t count = 0;
  for (char h : hit) count += h;
  return count;
}

}  // namespace detperm
