#pragma once

#include <cstddef>
#include <cstdint>

#include "tcash/bytes.hpp"
#include "tcash/rng.hpp"

/// Blind signatures over the multiplicative group mod an RSA modulus:
/// blind with m * r^e, sign with ^d, unblind with * r^-1.
namespace tcash::bs {

struct PublicKey {
  Nat e;
  Nat n;

  bool operator==(const PublicKey&) const = default;
};

struct PrivateKey {
  Nat d;
  Nat n;
  // Generation factors, kept for self-tests only; zero when unknown.
  Nat p;
  Nat q;

  bool operator==(const PrivateKey&) const = default;
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
};

/// Deterministic in `seed`. The modulus has exactly `modulus_bits` bits and
/// the round trip (m^e)^d = m is spot-checked before returning.
KeyPair keygen(std::size_t modulus_bits, std::uint64_t seed, unsigned long e = 65537,
               int rounds = 40);

/// Rebuilds a keypair from known factors (toy vectors, tests).
KeyPair keypair_from_factors(const Nat& p, const Nat& q, const Nat& e);

class BlindingFactor {
 public:
  /// Throws Errc::kNoInverse when gcd(r, n) != 1.
  BlindingFactor(Nat r, Nat n);

  /// Uniform unit mod n, resampled until coprime.
  static BlindingFactor random(const Nat& n, Rng& rng);

  const Nat& r() const { return r_; }
  const Nat& inverse() const { return r_inv_; }
  const Nat& modulus() const { return n_; }

 private:
  Nat r_;
  Nat r_inv_;
  Nat n_;
};

/// m * r^e mod n. Throws Errc::kDomain unless 0 <= m < n.
Nat blind(const Nat& m, const BlindingFactor& r, const PublicKey& pk);

/// m^d mod n. Throws Errc::kDomain unless 0 <= m < n.
Nat sign(const Nat& m_blinded, const PrivateKey& sk);

/// s * r^-1 mod n. Throws Errc::kNoInverse if r is not a unit mod n.
Nat unblind(const Nat& s_blinded, const BlindingFactor& r, const Nat& n);

/// s^e = m (mod n).
bool verify(const Nat& s, const Nat& m, const PublicKey& pk);

/// Big-endian reading of the digest. Throws Errc::kProfile unless n > 2^256.
Nat digest_to_message(const Digest& digest, const Nat& n);

}  // namespace tcash::bs
