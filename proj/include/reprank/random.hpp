#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace reprank {

/// Derives a stream seed from the global seed and a list of string/integer
/// components (stage name, prompt id, repetition index, ...). The mixing is
/// FNV-1a over the components followed by a SplitMix64 finalizer, so the
/// result is identical on every platform.
class SeedBuilder {
 public:
  explicit SeedBuilder(std::uint64_t global_seed);

  SeedBuilder& add(std::string_view component);
  SeedBuilder& add(std::uint64_t component);

  std::uint64_t value() const;

 private:
  std::uint64_t state_;
};

template <typename... Parts>
std::uint64_t derive_seed(std::uint64_t global_seed, const Parts&... parts) {
  SeedBuilder builder(global_seed);
  (builder.add(parts), ...);
  return builder.value();
}

// std::mt19937_64 is fully specified by the standard, but the std
// distributions are not; the helpers below keep sampled values identical
// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). bound must be positive.
  std::size_t uniform_index(std::size_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Standard normal via Box-Muller (one draw per call, no caching).
  double standard_normal();

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace reprank
