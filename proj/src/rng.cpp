#include "eprb/rng.hpp"

namespace eprb {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                    std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

inline PhiloxCounter round(const PhiloxCounter& c, const PhiloxKey& k) {
  std::uint32_t lo0, hi0, lo1, hi1;
  mulhilo(kMulA, c[0], lo0, hi0);
  mulhilo(kMulB, c[2], lo1, hi1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    ctr = round(ctr, key);
  }
  return ctr;
}

std::uint64_t RngStream::next_u64() {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(counter_),
                          static_cast<std::uint32_t>(counter_ >> 32),
                          static_cast<std::uint32_t>(stream_id_),
                          static_cast<std::uint32_t>(stream_id_ >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(seed_),
                      static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32_10(ctr, key);
  ++counter_;
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint32_t RngStream::next_index(std::uint32_t n) {
  // Multiply-high reduction; bias is at most n / 2^64.
  const std::uint64_t x = next_u64();
  const std::uint64_t lo = (x & 0xFFFFFFFFu) * n;
  const std::uint64_t hi = (x >> 32) * n + (lo >> 32);
  return static_cast<std::uint32_t>(hi >> 32) + 1;
}

}  // namespace eprb
