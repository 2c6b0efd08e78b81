#pragma once

// Seeded random stream with portable distributions. The standard library's
// distribution objects are implementation-defined, so seeded outputs would
// differ between libstdc++ and libc++; these are specified here instead.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace polokit {

/// Independent sub-stream seed (splitmix64 finaliser over seed and stream).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// FNV-1a, for deriving seeds from string keys.
[[nodiscard]] std::uint64_t hash_string(std::string_view s);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n); n must be > 0. Unbiased (rejection).
  std::uint64_t index(std::uint64_t n);
  /// Standard normal via Box-Muller; caches the second variate.
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace polokit
