#include "detperm/log_signed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detperm/stats.hpp"

namespace detperm {

double log_sum_exp(std::span<const double> logs) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double m = neg_inf;
  for (double x : logs) m = std::max(m, x);
  if (m == neg_inf) return neg_inf;
  NeumaierSum acc;
  for (double x : logs) {
    if (x == neg_inf) continue;
    acc.add(std::exp(x - m));
  }
  return m + std::log(acc.value());
}

}  // namespace detperm
