#pragma once

// Counter-based random numbers (Philox4x32-10).
//
// A value is a pure function of (seed, stream_id, counter), so any event can
// be regenerated independently of the order in which events are produced.

#include <array>
#include <cstdint>

namespace eprb {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Ten-round Philox 4x32 block function.
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// Streams used by the event generator; one per independent random purpose.
enum class StreamId : std::uint64_t {
  emission = 0,
  setting_1 = 1,
  setting_2 = 2,
  delay_1 = 3,
  delay_2 = 4,
  angle_table_1 = 5,
  angle_table_2 = 6,
  arrival_clock = 7,
};

class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id,
            std::uint64_t counter = 0)
      : seed_(seed), stream_id_(stream_id), counter_(counter) {}
  RngStream(std::uint64_t seed, StreamId stream, std::uint64_t counter = 0)
      : RngStream(seed, static_cast<std::uint64_t>(stream), counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  /// Value at the current counter; advances the counter by one.
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_double();
  /// Uniform on [1, n] (n >= 1).
  std::uint32_t next_index(std::uint32_t n);

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
};

}  // namespace eprb
