#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace ddhit {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
// A stream is addressed by (seed, stream, stream_class); the 128-bit counter
// holds the running block index in its low words and the stream id in the
// high words, so any replica can be reconstructed in isolation and draws
// never collide across replicas or engines.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint32_t stream_class = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32) ^ (0x9E3779B9u * stream_class)),
        block_(0) {}

  // One block -> two doubles in the open interval (0,1).
  std::pair<double, double> uniform2() {
    const auto w = philox_block(block_++);
    return {to_unit(w[0], w[1]), to_unit(w[2], w[3])};
  }

  double uniform() { return uniform2().first; }

  // One block -> (Exp(1) waiting time, uniform reaction pick).
  std::pair<double, double> exp_and_uniform() {
    const auto [u1, u2] = uniform2();
    return {-std::log(u1), u2};
  }

  // One block -> one standard normal (Box-Muller, cosine branch).
  double normal() {
    const auto [u1, u2] = uniform2();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t blocks_used() const { return block_; }

 private:
  static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) >> 32);
  }

  std::array<std::uint32_t, 4> philox_block(std::uint64_t index) const {
    std::uint32_t c0 = static_cast<std::uint32_t>(index);
    std::uint32_t c1 = static_cast<std::uint32_t>(index >> 32);
    std::uint32_t c2 = stream_lo_;
    std::uint32_t c3 = stream_hi_;
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint32_t hi0 = mulhi(M0, c0), lo0 = M0 * c0;
      const std::uint32_t hi1 = mulhi(M1, c2), lo1 = M1 * c2;
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      k0 += W0;
      k1 += W1;
    }
    return {c0, c1, c2, c3};
  }

  // 53 random bits + half-ulp offset: strictly inside (0,1), log-safe.
  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t block_;
};

// Stream classes keep engines on disjoint randomness even under one master seed.
inline constexpr std::uint32_t kStreamSsa = 0;
inline constexpr std::uint32_t kStreamDiffusion = 1;

}  // namespace ddhit
