#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace cmemnn {

/// splitmix64 finalizer. Pure function, the basis of every random stream in
/// the toolkit so that results are bit-reproducible across runs and platforms.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Key for a named substream of a seed, e.g. stream_key(seed, "shuffle").
constexpr std::uint64_t stream_key(std::uint64_t seed, std::string_view tag) {
  return mix64(seed * kGolden + fnv1a(tag));
}

/// Sequential splitmix64 generator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return mix64(state_ += kGolden); }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

 private:
  std::uint64_t state_;
};

/// Counter-based draw: entry `i` of the stream identified by `key`.
/// Independent of evaluation order.
constexpr std::uint64_t counter_u64(std::uint64_t key, std::uint64_t i) {
  return mix64(key + (i + 1) * kGolden);
}

constexpr double counter_uniform(std::uint64_t key, std::uint64_t i) {
  return static_cast<double>(counter_u64(key, i) >> 11) * 0x1.0p-53;
}

/// Seeded Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(v[i - 1], v[j]);
  }
}

}  // namespace cmemnn
