#pragma once

#include <cstddef>
#include <optional>

#include "detperm/log_signed.hpp"
#include "detperm/matrix.hpp"

namespace detperm {

/// Size ceilings for the exact oracles; crossing one raises SizeError
/// rather than silently truncating.
inline constexpr std::size_t kNaivePermanentLimit = 10;
inline constexpr std::size_t kRyserPermanentLimit = 30;
/// Below this order the result also fits comfortably in native precision.
inline constexpr std::size_t kExactSmallLimit = 12;

struct PermanentValue {
  LogSignedValue value;
  /// Native-precision result, present for n <= kExactSmallLimit.
  std::optional<double> exact_small;
};

/// Exact permanent by summing over all n! permutations. n <= 10.
PermanentValue permanent_naive(const DenseMatrix& a);

/// Exact permanent by Ryser's inclusion-exclusion over column subsets,
/// walked in Gray-code order so each subset step is O(n). n <= 30.
///
/// The 2^n - 1 subsets are split into fixed blocks of 2^20 consecutive
/// Gray-code positions; blocks may be evaluated on any number of threads,
/// and their compensated partial sums are combined in block order, so the
/// result is bit-identical for every thread count.
PermanentValue permanent_ryser(const DenseMatrix& a, int threads = 0);

}  // namespace detperm
