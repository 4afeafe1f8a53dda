#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace orbitlab {

/// Seedable 64-bit-state generator (splitmix64). Chosen over the std
/// engines because its output stream is fully pinned by the algorithm,
/// so reports are reproducible across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  static constexpr const char* algorithm_id() { return "splitmix64"; }

 private:
  std::uint64_t state_;
};

/// FNV-1a over a byte string; used to key derived RNG streams.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Derived stream for a (seed, action, suite) triple. Streams are
/// independent of execution order, so serial and parallel suite runs
/// draw identical samples.
inline SplitMix64 derived_stream(std::uint64_t seed, std::string_view action_id,
                                 std::string_view suite_name) {
  std::string key;
  key.reserve(action_id.size() + suite_name.size() + 1);
  key.append(action_id);
  key.push_back('\x1f');
  key.append(suite_name);
  return SplitMix64(seed ^ fnv1a64(key));
}

}  // namespace orbitlab
