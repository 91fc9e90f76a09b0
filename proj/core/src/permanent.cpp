#include "detperm/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "detperm/errors.hpp"
#include "detperm/parallel.hpp"
#include "detperm/stats.hpp"

namespace detperm {

namespace {

PermanentValue pack_result(double sum, std::size_t n) {
  PermanentValue out;
  out.value = LogSignedValue::from_value(sum);
  if (n <= kExactSmallLimit) out.exact_small = sum;
  return out;
}

}  // namespace

PermanentValue permanent_naive(const DenseMatrix& a) {
  if (!a.is_square()) {
    throw DomainError("permanent requires a square matrix");
  }
  const std::size_t n = a.rows();
  if (n > kNaivePermanentLimit) {
    throw SizeError("permanent_naive supports n <= " +
                    std::to_string(kNaivePermanentLimit) +
                    "; use permanent_ryser for larger matrices");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  NeumaierSum sum;
  do {
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= a(i, perm[i]);
    sum.add(prod);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return pack_result(sum.value(), n);
}

namespace {

// Partial Ryser sum over Gray-code positions [first, last).
// Position k stands for the column subset with mask k ^ (k >> 1); the
// term is (-1)^popcount(mask) * prod_i (sum of row i over the subset).
double ryser_block(const DenseMatrix& a, std::uint64_t first,
                   std::uint64_t last) {
  const std::size_t n = a.rows();
  const std::uint64_t start_mask = (first - 1) ^ ((first - 1) >> 1);

  std::vector<double> row_sums(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if ((start_mask >> j) & 1u) {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] += a(i, j);
    }
  }

  int parity = std::popcount(start_mask) & 1 ? -1 : 1;
  std::uint64_t mask = start_mask;
  NeumaierSum sum;
  for (std::uint64_t k = first; k < last; ++k) {
    const unsigned bit = static_cast<unsigned>(std::countr_zero(k));
    const std::uint64_t flipped = std::uint64_t{1} << bit;
    if (mask & flipped) {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] -= a(i, bit);
      parity = -parity;
    } else {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] += a(i, bit);
      parity = -parity;
    }
    mask ^= flipped;

    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= row_sums[i];
    sum.add(parity > 0 ? prod : -prod);
  }
  return sum.value();
}

}  // namespace

PermanentValue permanent_ryser(const DenseMatrix& a, int threads) {
  if (!a.is_square()) {
    throw DomainError("permanent requires a square matrix");
  }
  const std::size_t n = a.rows();
  if (n > kRyserPermanentLimit) {
    throw SizeError("permanent_ryser supports n <= " +
                    std::to_string(kRyserPermanentLimit));
  }

  const std::uint64_t total = (std::uint64_t{1} << n) - 1;  // subsets 1..2^n-1
  constexpr std::uint64_t kBlock = std::uint64_t{1} << 20;
  const std::uint64_t blocks = (total + kBlock - 1) / kBlock;

  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
  parallel_for(static_cast<std::size_t>(blocks), threads, [&](std::size_t b) {
    const std::uint64_t first = 1 + static_cast<std::uint64_t>(b) * kBlock;
    const std::uint64_t last = std::min(total + 1, first + kBlock);
    partial[b] = ryser_block(a, first, last);
  });

  NeumaierSum sum;
  for (double p : partial) sum.add(p);
  const double signed_sum = (n % 2 == 0) ? sum.value() : -sum.value();
  return pack_result(signed_sum, n);
}

}  // namespace detperm
