#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace perturbench {

/// SplitMix64 generator. The recurrence and constants are fixed so that a
/// seed yields the same stream on every platform and in every port of the
/// tool; golden files depend on it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, bound). Rejects the low 2^64 mod bound values so
  /// the modulo is unbiased. bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  /// First `count` entries of a Fisher-Yates shuffle of [0, n). A shorter
  /// prefix drawn from the same seed is always a prefix of a longer one.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t count) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    if (count > n) count = n;
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = i + static_cast<std::size_t>(below(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
  }

  [[nodiscard]] std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Independent child seed for a numbered sub-stream of `base`.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::uint64_t stream) noexcept {
  Rng rng(base ^ (stream * 0xD1B54A32D192ED03ULL));
  rng.next();
  return rng.next();
}

}  // namespace perturbench
