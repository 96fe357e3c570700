#include "tcash/blindsig.hpp"

#include <string>
#include <utility>

#include "tcash/errors.hpp"
#include "tcash/numtheory.hpp"

namespace tcash::bs {

namespace {

void require_in_domain(const Nat& m, const Nat& n, const char* what) {
  if (sgn(m) < 0 || m >= n) throw Error(Errc::kDomain, std::string(what) + " outside [0, n)");
}

bool round_trips(const KeyPair& kp, Rng& rng) {
  for (int i = 0; i < 4; ++i) {
    Nat m = rng.below(kp.pub.n);
    if (nt::mod_exp(nt::mod_exp(m, kp.pub.e, kp.pub.n), kp.priv.d, kp.pub.n) != m) return false;
  }
  return true;
}

}  // namespace

KeyPair keypair_from_factors(const Nat& p, const Nat& q, const Nat& e) {
  Nat n = p * q;
  Nat p1 = p - 1;
  Nat q1 = q - 1;
  Nat lambda;
  mpz_lcm(lambda.get_mpz_t(), p1.get_mpz_t(), q1.get_mpz_t());
  Nat d = nt::mod_inverse(e, lambda);
  return KeyPair{PublicKey{e, n}, PrivateKey{d, n, p, q}};
}

KeyPair keygen(std::size_t modulus_bits, std::uint64_t seed, unsigned long e, int rounds) {
  if (modulus_bits < 8) throw Error(Errc::kDomain, "modulus too small");
  if (e < 3 || e % 2 == 0) throw Error(Errc::kDomain, "public exponent must be odd and >= 3");
  Rng rng(seed);
  const Nat exponent(e);
  const std::size_t p_bits = (modulus_bits + 1) / 2;
  const std::size_t q_bits = modulus_bits - p_bits;

  auto pick_prime = [&](std::size_t bits) {
    for (int attempt = 0; attempt < 256; ++attempt) {
      Nat candidate = nt::random_prime(bits, rng, rounds);
      // Second-highest bit set so the product reaches the full width.
      if (bits >= 2 && mpz_tstbit(candidate.get_mpz_t(), bits - 2) == 0) continue;
      Nat g;
      Nat pm1 = candidate - 1;
      mpz_gcd(g.get_mpz_t(), pm1.get_mpz_t(), exponent.get_mpz_t());
      if (g == 1) return candidate;
    }
    throw Error(Errc::kGenerationFailure, "no suitable RSA prime");
  };

  for (int attempt = 0; attempt < 64; ++attempt) {
    Nat p = pick_prime(p_bits);
    Nat q = pick_prime(q_bits);
    if (p == q) continue;
    KeyPair kp = keypair_from_factors(p, q, exponent);
    if (mpz_sizeinbase(kp.pub.n.get_mpz_t(), 2) != modulus_bits) continue;
    if (!round_trips(kp, rng)) continue;
    return kp;
  }
  throw Error(Errc::kGenerationFailure,
              "key generation exhausted for " + std::to_string(modulus_bits) + " bits");
}

BlindingFactor::BlindingFactor(Nat r, Nat n) : r_(std::move(r)), n_(std::move(n)) {
  if (n_ < 2) throw Error(Errc::kDomain, "modulus must be at least 2");
  r_inv_ = nt::mod_inverse(r_, n_);
}

BlindingFactor BlindingFactor::random(const Nat& n, Rng& rng) {
  if (n < 3) throw Error(Errc::kDomain, "modulus too small for blinding");
  for (int attempt = 0; attempt < 1024; ++attempt) {
    Nat r = rng.between(1, n - 1);
    Nat g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
    if (g == 1) return BlindingFactor(std::move(r), n);
  }
  throw Error(Errc::kGenerationFailure, "no unit found for blinding");
}

Nat blind(const Nat& m, const BlindingFactor& r, const PublicKey& pk) {
  require_in_domain(m, pk.n, "message");
  if (r.modulus() != pk.n) throw Error(Errc::kDomain, "blinding factor bound to another modulus");
  return (m * nt::mod_exp(r.r(), pk.e, pk.n)) % pk.n;
}

Nat sign(const Nat& m_blinded, const PrivateKey& sk) {
  require_in_domain(m_blinded, sk.n, "message");
  return nt::mod_exp(m_blinded, sk.d, sk.n);
}

Nat unblind(const Nat& s_blinded, const BlindingFactor& r, const Nat& n) {
  if (r.modulus() != n) {
    // Caller supplied a different modulus; recompute the inverse there.
    return (s_blinded * nt::mod_inverse(r.r(), n)) % n;
  }
  return (s_blinded * r.inverse()) % n;
}

bool verify(const Nat& s, const Nat& m, const PublicKey& pk) {
  if (pk.n < 2 || sgn(s) < 0 || sgn(m) < 0 || s >= pk.n || m >= pk.n) return false;
  return nt::mod_exp(s, pk.e, pk.n) == m;
}

Nat digest_to_message(const Digest& digest, const Nat& n) {
  if (n <= (Nat(1) << 256)) throw Error(Errc::kProfile, "modulus must exceed 2^256");
  return digest_to_nat(digest);
}

}  // namespace tcash::bs
