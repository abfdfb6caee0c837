#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace rsp {

// Philox4x32-10 counter-based generator. The 64-bit seed is the key; the
// 128-bit counter is (block index, stream id). Two generators with the same
// (seed, stream) produce the same sequence on every platform, and streams are
// independent, so parallel work can be split by stream id.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on [0,1) with 53 random bits.
  double uniform();
  // Uniform on (0,1).
  double uniform_open();
  // Standard normal via Box-Muller (caches the second variate).
  double normal();
  // Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);
  // Gamma(shape, 1), Marsaglia-Tsang.
  double gamma(double shape);

  // A generator on a derived stream; deterministic in (seed, stream, index).
  Rng split(std::uint64_t index) const;

  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Block philox(Block counter, Key key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buf_{};
  int pos_ = 4;
  bool have_spare_ = false;
  double spare_ = 0;
};

}  // namespace rsp
