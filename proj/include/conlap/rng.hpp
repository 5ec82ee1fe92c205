#pragma once

#include <cmath>
#include <cstdint>

namespace conlap {

// Counter-based pseudo-random generator (splitmix64 output function).
//
// Every random quantity in the library flows from an explicit 64-bit seed
// through this generator:
//
//     out(seed, k) = mix64(seed + (k + 1) * 0x9E3779B97F4A7C15)
//
// where mix64 is the splitmix64 finalizer.  The generator is a pure function
// of (seed, counter): no hidden state, O(1) random access into the stream,
// and bit-identical output on every platform with 64-bit integers.  Distinct
// substreams are derived with `substream(seed, tag)`, which mixes the tag
// into a fresh seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix64(seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform double in [0, 1), 53 significant bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform double in [-1, 1).
  double symmetric(std::uint64_t counter) const {
    return 2.0 * uniform(counter) - 1.0;
  }

  // Standard normal via Box-Muller on counters (2k, 2k+1).
  double normal(std::uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t seed() const { return seed_; }

  static std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(tag));
  }

 private:
  std::uint64_t seed_;
};

}  // namespace conlap
