#pragma once

#include <bit>
#include <cstdint>

namespace bandtsp {

// Identifies one reproducible random stream. Distinct (seed, chunk_index)
// pairs give statistically independent streams and the same pair always
// replays the identical sequence, so chunked Monte Carlo can be scheduled
// on any number of threads without changing a single draw.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t chunk_index = 0;
};

// Splittable counter-style generator: every stream walks its own odd Weyl
// increment and pushes the counter through the splitmix64 finalizer.
// Deriving a stream from its key is O(1) (no sequential skipping).
class SplitStream {
 public:
  explicit SplitStream(StreamKey key) {
    const std::uint64_t a = mix(key.seed + kGolden);
    const std::uint64_t b = mix(key.chunk_index + 0xbf58476d1ce4e5b9ull);
    state_ = mix(a ^ (b + kGolden));
    gamma_ = mix_gamma(b ^ (a + 0x94d049bb133111ebull));
  }

  std::uint64_t next_u64() { return mix(state_ += gamma_); }

  // Uniform on [0,1); exactly 1.0 is unreachable by construction
  // (53-bit mantissa, max value (2^53-1)/2^53).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // MurmurHash3 finalizer forced odd, with enough 0/1 transitions to act as
  // a sound per-stream increment (SplittableRandom gamma conditioning).
  static constexpr std::uint64_t mix_gamma(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
    z = (z ^ (z >> 33)) | 1ull;
    const int transitions = std::popcount(z ^ (z >> 1));
    return (transitions < 24) ? z ^ 0xaaaaaaaaaaaaaaaaull : z;
  }

  std::uint64_t state_ = 0;
  std::uint64_t gamma_ = 0;
};

}  // namespace bandtsp
