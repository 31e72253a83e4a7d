#include "reprank/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace reprank {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv_byte(std::uint64_t h, unsigned char byte) {
  return (h ^ byte) * kFnvPrime;
}

}  // namespace

SeedBuilder::SeedBuilder(std::uint64_t global_seed)
    : state_(splitmix64(global_seed ^ kFnvOffset)) {}

SeedBuilder& SeedBuilder::add(std::string_view component) {
  // Tag and length prefix keep ("ab","c") distinct from ("a","bc").
  state_ = fnv_byte(state_, 's');
  for (int shift = 0; shift < 64; shift += 8) {
    state_ = fnv_byte(state_, static_cast<unsigned char>(component.size() >> shift));
  }
  for (char c : component) {
    state_ = fnv_byte(state_, static_cast<unsigned char>(c));
  }
  return *this;
}

SeedBuilder& SeedBuilder::add(std::uint64_t component) {
  state_ = fnv_byte(state_, 'u');
  for (int shift = 0; shift < 64; shift += 8) {
    state_ = fnv_byte(state_, static_cast<unsigned char>(component >> shift));
  }
  return *this;
}

std::uint64_t SeedBuilder::value() const { return splitmix64(state_); }

std::size_t Rng::uniform_index(std::size_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform_index: bound must be positive");
  }
  const std::uint64_t range = bound;
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % range);
  std::uint64_t draw = engine_();
  while (draw >= limit) {
    draw = engine_();
  }
  return static_cast<std::size_t>(draw % range);
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::standard_normal() {
  double u1 = uniform01();
  while (u1 <= 0.0) {
    u1 = uniform01();
  }
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace reprank
