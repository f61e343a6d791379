#pragma once

#include <cstdint>

namespace mtilt {

// Counter-based stream built on the Philox 4x64-10 bijection. A stream is
// addressed by (seed, stream_id); distinct stream ids give statistically
// independent sequences from the same seed, so per-replicate streams can be
// created on the fly without skip-ahead. Draw order within a stream is fixed,
// which makes every estimate reproducible for a given (seed, stream layout)
// regardless of how replicates are assigned to threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : key0_(seed), key1_(stream_id) {}

  std::uint64_t next_u64() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1); safe to pass to log().
  double next_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via the ziggurat method.
  double next_normal() noexcept;

  // Cheap mixing for deriving sub-seeds (per grid point, per experiment row).
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept;

 private:
  void refill() noexcept;

  std::uint64_t key0_;
  std::uint64_t key1_;
  std::uint64_t ctr_lo_ = 0;
  std::uint64_t ctr_hi_ = 0;
  std::uint64_t buf_[4] = {};
  unsigned pos_ = 4;
};

}  // namespace mtilt
