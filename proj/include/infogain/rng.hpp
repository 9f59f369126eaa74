#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace infogain {

// Deterministic random stream. The engine (mt19937_64) and seed_seq are
// fully specified by the standard; bounded integers and doubles are derived
// here rather than with std::*_distribution, whose output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0, 0) {}

  // Independent stream `stream` of purpose `tag` under a master seed.
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, n), n >= 1, by rejection.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Stream tags, so that different consumers of one master seed never share a stream.
namespace rng_tag {
inline constexpr std::uint64_t kBootstrap = 1;
inline constexpr std::uint64_t kShapley = 2;
inline constexpr std::uint64_t kSynthRows = 3;
inline constexpr std::uint64_t kCrossFit = 4;
}  // namespace rng_tag

}  // namespace infogain
