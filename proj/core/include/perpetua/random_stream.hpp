#pragma once

#include <array>
#include <cstdint>

namespace perpetua {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3"). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

// SplitMix64 finalizer, used to derive child stream ids and seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Counter-based random stream identified by (seed, stream_id).
//
// The seed is the Philox key; the stream id occupies the upper half of the
// 128-bit counter and the block index the lower half, so streams with
// different ids never share a block. Output depends only on
// (seed, stream_id, position), never on the platform's <random>.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t next_u64() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Uniform on (0, 1); never returns 0 or 1.
  double uniform_open() noexcept;
  // Standard normal (Box-Muller, one value per call).
  double normal() noexcept;

  // Deterministic child stream. Does not advance *this.
  RandomStream split(std::uint64_t tag) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  // Number of 32-bit words consumed so far.
  std::uint64_t position() const noexcept { return block_ * 4 - (4 - used_); }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;
};

// The two substreams used to draw a pair (M, Q): M always comes from `m`,
// Q from `q`, so a rejection sampler on one marginal never shifts the other.
struct PairStream {
  explicit PairStream(const RandomStream& parent) noexcept
      : m(parent.split(0x4d)), q(parent.split(0x51)) {}
  RandomStream m;
  RandomStream q;
};

}  // namespace perpetua
