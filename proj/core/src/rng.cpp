#include "detperm/rng.hpp"

#include "detperm/stats.hpp"

namespace detperm {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::array<std::uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

PhiloxEngine::PhiloxEngine(SeededSource source)
    : key_{static_cast<std::uint32_t>(source.seed),
           static_cast<std::uint32_t>(source.seed >> 32)},
      stream_(source.stream) {}

void PhiloxEngine::refill() {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(block_),
      static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_),
      static_cast<std::uint32_t>(stream_ >> 32)};
  buffer_ = philox4x32_10(counter, key_);
  buffered_ = 4;
  ++block_;
}

std::uint64_t PhiloxEngine::next_u64() {
  if (buffered_ < 2) refill();
  const std::uint64_t lo = buffer_[4 - buffered_];
  const std::uint64_t hi = buffer_[4 - buffered_ + 1];
  buffered_ -= 2;
  return lo | (hi << 32);
}

double PhiloxEngine::next_uniform() {
  const std::uint64_t bits = next_u64() >> 12;  // top 52 bits
  return (static_cast<double>(bits) + 0.5) * 0x1p-52;
}

double PhiloxEngine::next_normal() { return inverse_normal_cdf(next_uniform()); }

int PhiloxEngine::next_sign(double p_plus) {
  return next_uniform() < p_plus ? 1 : -1;
}

}  // namespace detperm
