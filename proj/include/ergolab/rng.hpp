#pragma once

#include <cstdint>

namespace ergolab::rng {

// SplitMix64 finalizer. All randomness in the library is counter-based:
// sample i of stream s under root seed r is a pure function of (r, s, i),
// so results are independent of evaluation order and thread count.
inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

// Uniform double in [0, 1), 53 mantissa bits.
inline constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline constexpr double uniform(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t index) {
  return to_unit(mix(seed, stream, index));
}

// Stream tags, one per consumer so seeds never collide across modules.
inline constexpr std::uint64_t kLebesgueStream = 0x01;
inline constexpr std::uint64_t kPushforwardStream = 0x02;
inline constexpr std::uint64_t kCenterStream = 0x03;
inline constexpr std::uint64_t kPairStream = 0x04;
inline constexpr std::uint64_t kCandidateStream = 0x05;
inline constexpr std::uint64_t kAnchorStream = 0x06;

}  // namespace ergolab::rng
