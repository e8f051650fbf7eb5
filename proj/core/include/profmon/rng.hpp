#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace profmon {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11), matching the
// Random123 reference implementation bit for bit. Every (key, counter) pair
// maps to an independent 128-bit block, so any replication can be generated
// without touching the others.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr const char* kAlgorithm = "philox4x32-10";
  static constexpr int kRounds = 10;

  static Counter block(Counter counter, Key key);
};

// 32-bit uniform random bit generator over one Philox substream.
//   key     = {seed & 0xffffffff, seed >> 32}
//   counter = {block & 0xffffffff, block >> 32, substream, stream}
// Words of each block are returned in order 0..3.
class PhiloxEngine {
 public:
  using result_type = std::uint32_t;

  PhiloxEngine(std::uint64_t seed, std::uint32_t stream, std::uint32_t substream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (index_ == 4) refill();
    return buffer_[index_++];
  }

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint64_t block_ = 0;
  std::uint32_t stream_;
  std::uint32_t substream_;
  Philox4x32::Counter buffer_{};
  int index_ = 4;
};

// Standard normal variates for one replication: Boost's ziggurat
// normal_distribution driven by a PhiloxEngine. Stream format version 2;
// changing the engine layout or the transform changes every simulated
// number, so bump kStreamFormatVersion when doing so.
class NormalStream {
 public:
  static constexpr int kStreamFormatVersion = 2;

  NormalStream(std::uint64_t seed, std::uint32_t stream, std::uint32_t substream)
      : engine_(seed, stream, substream) {}

  double next();

  // Uniform on the open interval (0, 1) with 53 bits of resolution.
  double next_uniform();

 private:
  PhiloxEngine engine_;
};

inline constexpr std::uint64_t kDefaultSeed = 20240517ULL;

}  // namespace profmon
