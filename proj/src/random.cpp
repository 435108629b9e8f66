#include "vqs/random.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace vqs {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output mixer (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed)
    : base_(mix64(seed + kGolden)), counter_(0) {}

RandomSource::RandomSource(FromBase, std::uint64_t base)
    : base_(base), counter_(0) {}

RandomSource RandomSource::derive(
    std::initializer_list<std::uint64_t> keys) const {
  std::uint64_t base = base_;
  for (std::uint64_t key : keys) {
    base = mix64(base ^ mix64(key + kGolden));
  }
  // Shift the child identity away from the parent so derive({}) is not a fork
  // of the same stream.
  return RandomSource(FromBase{}, mix64(base + kGolden));
}

std::uint64_t RandomSource::next_u64() {
  counter_ += 1;
  return mix64(base_ + counter_ * kGolden);
}

double RandomSource::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint32_t RandomSource::next_below(std::uint32_t bound) {
  assert(bound > 0);
  // Fixed-point multiply keeps the draw branch-free and reproducible; the
  // bias is below 2^-32 and irrelevant at simulation sample sizes.
  return static_cast<std::uint32_t>(
      (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

std::pair<double, double> RandomSource::next_gaussian_pair() {
  double u1 = next_double();
  double u2 = next_double();
  if (u1 <= 0.0) {
    u1 = 0x1.0p-53;
  }
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(angle), r * std::sin(angle)};
}

}  // namespace vqs
