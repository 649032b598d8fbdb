#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pnu {

/// Seeded generator with portable, replayable draws.
///
/// The engine is std::mt19937_64, whose output sequence the standard pins
/// exactly. The distribution layer is implemented here instead of using
/// <random>'s distributions, whose algorithms vary between standard
/// libraries. Bump kRngVersion whenever any draw changes.
class Rng {
 public:
  static constexpr std::string_view kRngVersion = "mt19937_64/polar-normal/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal by the Marsaglia polar method.
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n);

  /// Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer of (master, index); gives independent sub-seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace pnu
