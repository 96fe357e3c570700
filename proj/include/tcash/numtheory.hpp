#pragma once

#include <cstddef>
#include <cstdint>

#include "tcash/bytes.hpp"
#include "tcash/rng.hpp"

namespace tcash::nt {

/// base^exp mod modulus. Throws Errc::kDomain when modulus < 2.
Nat mod_exp(const Nat& base, const Nat& exp, const Nat& modulus);

/// b with a*b = 1 (mod modulus). Throws Errc::kNoInverse when gcd(a, modulus) != 1.
Nat mod_inverse(const Nat& a, const Nat& modulus);

/// Miller-Rabin. Inputs below ~3.3e24 are decided exactly with the first
/// thirteen prime bases; larger inputs get `rounds` pseudo-random bases
/// (error <= 4^-rounds).
bool is_probable_prime(const Nat& n, int rounds = 40);

/// Prime with exactly `bits` bits (top bit set).
Nat random_prime(std::size_t bits, Rng& rng, int rounds = 40);

/// Z_p^* together with a subgroup of prime order q generated by alpha.
struct DlpGroup {
  Nat p;
  Nat q;
  Nat alpha;

  bool operator==(const DlpGroup&) const = default;
};

/// The public triple that goes on chain.
struct DlpPublic {
  Nat p;
  Nat alpha;
  Nat beta;

  bool operator==(const DlpPublic&) const = default;
};

struct DlpInstance {
  DlpGroup group;
  Nat x;
  Nat beta;

  DlpPublic public_part() const { return {group.p, group.alpha, beta}; }
  bool operator==(const DlpInstance&) const = default;
};

/// Generates q (q_bits) then searches p = k*q + 1 (p_bits) and an alpha of
/// order q. Deterministic in `seed`. Throws Errc::kDomain if q_bits >= p_bits
/// and Errc::kGenerationFailure when the bounded search runs dry.
DlpGroup gen_dlp_group(std::size_t p_bits, std::size_t q_bits, std::uint64_t seed,
                       int rounds = 40);

/// Checks every group invariant. Bit lengths are checked only when non-zero.
bool is_valid_group(const DlpGroup& g, std::size_t p_bits = 0, std::size_t q_bits = 0,
                    int rounds = 40);

/// x uniform in [1, q-1], beta = alpha^x mod p.
DlpInstance gen_dlp_instance(const DlpGroup& group, std::uint64_t seed);

/// Instance with a caller-chosen secret; throws Errc::kDomain unless 1 <= x < q.
DlpInstance make_dlp_instance(const DlpGroup& group, const Nat& x);

/// alpha^x = beta (mod p). Malformed inputs yield false.
bool verify_dlp(const Nat& p, const Nat& alpha, const Nat& beta, const Nat& x);
inline bool verify_dlp(const DlpPublic& pub, const Nat& x) {
  return verify_dlp(pub.p, pub.alpha, pub.beta, x);
}

}  // namespace tcash::nt
