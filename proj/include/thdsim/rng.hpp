#pragma once

#include <cmath>
#include <cstdint>

namespace thdsim {

// Deterministic splittable random stream built on the splitmix64 mixer.
//
// A stream is identified by a 64-bit key. Child streams are derived purely
// from the parent key and a word, and draws are a pure function of
// (key, draw index), so any (seed, trace, channel, index) tuple maps to the
// same values regardless of execution order or thread count. This is what
// makes ensembles byte-identical for any worker count.
class SplitStream {
 public:
  static SplitStream from_seed(uint64_t seed) { return SplitStream(mix(seed ^ kDomain)); }

  SplitStream child(uint64_t word) const {
    return SplitStream(mix(key_ ^ (mix(word + kGolden) + kGolden)));
  }

  uint64_t next_u64() {
    counter_ += 1;
    return mix(key_ + counter_ * kGolden);
  }

  // Uniform in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (one value per call).
  double normal() {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  uint64_t key() const { return key_; }

 private:
  explicit SplitStream(uint64_t key) : key_(key) {}

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr uint64_t kDomain = 0x7484D513175AE1C3ULL;
  static constexpr double kTwoPi = 6.283185307179586476925287;

  uint64_t key_;
  uint64_t counter_ = 0;
};

// Channel tags for the trace seeding contract: within one trace, quadrature
// draws use child(quadrature).child(basis index); jitter draws get their own
// channels so adding an error model never perturbs the quadrature stream.
namespace rng_channel {
inline constexpr uint64_t quadrature = 1;
inline constexpr uint64_t timing = 2;
inline constexpr uint64_t phase = 3;
}  // namespace rng_channel

// FNV-1a, used to derive sweep sub-seeds from parameter paths.
inline uint64_t fnv1a64(const char* data, size_t len) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (size_t i = 0; i < len; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace thdsim
