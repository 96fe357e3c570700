#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "tcash/bytes.hpp"

namespace tcash {

/// Deterministic random source. Everything random in the library draws from
/// one of these so identical seeds reproduce identical keys, coins and runs.
/// Only std::mt19937_64 output is consumed (its sequence is fixed by the
/// standard); no std distributions are used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from (seed, label).
  Rng(std::uint64_t seed, std::string_view label) : engine_(derive_seed(seed, label)) {}

  static std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform value with at most `bits` bits.
  Nat bits(std::size_t bits);

  /// Uniform in [0, bound); bound > 0.
  Nat below(const Nat& bound);

  /// Uniform in [lo, hi]; lo <= hi.
  Nat between(const Nat& lo, const Nat& hi);

  Digest digest();

 private:
  std::mt19937_64 engine_;
};

}  // namespace tcash
