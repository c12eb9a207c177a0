#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace linnik {

/// Address of an independent random stream: the key is the master seed, the
/// stream id occupies the upper half of the counter.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  bool operator==(const RngStream&) const = default;
};

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based engine over one RngStream. Output i of the stream is a pure
/// function of (master_seed, stream_id, i), so streams can be generated in any
/// order on any thread. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(RngStream stream) : stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 2) refill();
    return buffer_[lane_++];
  }

  /// Uniform on the open interval (0, 1); both endpoints are unreachable.
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const { return 2 * block_ - (2 - lane_); }
  const RngStream& stream() const { return stream_; }

 private:
  void refill();

  RngStream stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int lane_ = 2;
};

/// SplitMix64 finalizer; used to derive per-cell seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace linnik
