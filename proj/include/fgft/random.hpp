#pragma once

#include <cstdint>
#include <random>

namespace fgft {

/// Seed plus stream index. Draw d of an experiment uses stream_index = d, so
/// every draw is reproducible on its own.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// mt19937_64 seeded from splitmix64(seed, stream). Uniform doubles take the top
// 53 bits of each 64-bit output, so the stream of values is fixed by the
// generator alone and not by a library distribution implementation.
class Rng {
 public:
  explicit Rng(RngSpec spec) {
    std::uint64_t state = spec.seed;
    const std::uint64_t a = detail::splitmix64(state);
    state ^= spec.stream_index * 0xD1B54A32D192ED03ULL;
    const std::uint64_t b = detail::splitmix64(state);
    engine_.seed(a ^ (b << 1) ^ (b >> 7));
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fgft
