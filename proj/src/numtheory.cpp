#include "tcash/numtheory.hpp"

#include <array>
#include <string>

#include "tcash/errors.hpp"

namespace tcash::nt {

namespace {

constexpr std::array<unsigned long, 13> kWitnessBases{2, 3, 5, 7, 11, 13, 17,
                                                      19, 23, 29, 31, 37, 41};

// Above this bound the thirteen fixed bases stop being a proof.
const Nat& deterministic_bound() {
  static const Nat bound("3317044064679887385961981", 10);
  return bound;
}

constexpr std::array<unsigned long, 54> kSmallPrimes{
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,
    47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181,
    191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

std::size_t bit_length(const Nat& n) { return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2); }

// One Miller-Rabin round: false means `a` witnesses that n is composite.
bool passes_round(const Nat& n, const Nat& n_minus_1, const Nat& d, unsigned s, const Nat& a) {
  Nat y = mod_exp(a, d, n);
  if (y == 1 || y == n_minus_1) return true;
  for (unsigned i = 1; i < s; ++i) {
    y = (y * y) % n;
    if (y == n_minus_1) return true;
    if (y == 1) return false;
  }
  return false;
}

}  // namespace

Nat mod_exp(const Nat& base, const Nat& exp, const Nat& modulus) {
  if (modulus < 2) throw Error(Errc::kDomain, "modulus must be at least 2");
  if (sgn(exp) < 0) throw Error(Errc::kDomain, "negative exponent");
  Nat out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

Nat mod_inverse(const Nat& a, const Nat& modulus) {
  if (modulus < 2) throw Error(Errc::kDomain, "modulus must be at least 2");
  Nat out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    throw Error(Errc::kNoInverse, "gcd(a, modulus) != 1");
  }
  return out;
}

bool is_probable_prime(const Nat& n, int rounds) {
  if (rounds < 1) throw Error(Errc::kDomain, "rounds must be at least 1");
  if (n < 2) return false;
  for (unsigned long sp : kSmallPrimes) {
    if (n == sp) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), sp) != 0) return false;
  }

  Nat n_minus_1 = n - 1;
  Nat d = n_minus_1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t()) != 0) {
    d >>= 1;
    ++s;
  }

  if (n < deterministic_bound()) {
    for (unsigned long base : kWitnessBases) {
      if (!passes_round(n, n_minus_1, d, s, Nat(base))) return false;
    }
    return true;
  }

  // Bases are a function of n alone so the answer is reproducible.
  Rng rng(Rng::derive_seed(0x6d696c6c65722d72ULL, n.get_str(16)));
  Nat hi = n - 2;
  for (int i = 0; i < rounds; ++i) {
    Nat a = rng.between(2, hi);
    if (!passes_round(n, n_minus_1, d, s, a)) return false;
  }
  return true;
}

Nat random_prime(std::size_t bits, Rng& rng, int rounds) {
  if (bits < 2) throw Error(Errc::kDomain, "prime needs at least 2 bits");
  const std::size_t max_attempts = 200 * bits + 1000;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Nat candidate = rng.bits(bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    if (bits > 2) mpz_setbit(candidate.get_mpz_t(), 0);
    if (is_probable_prime(candidate, rounds)) return candidate;
  }
  throw Error(Errc::kGenerationFailure, "no " + std::to_string(bits) + "-bit prime found");
}

DlpGroup gen_dlp_group(std::size_t p_bits, std::size_t q_bits, std::uint64_t seed, int rounds) {
  if (q_bits < 2 || q_bits >= p_bits) {
    throw Error(Errc::kDomain, "need 2 <= q_bits < p_bits");
  }
  Rng rng(seed);

  const std::size_t max_k_attempts = 100 * p_bits + 2000;
  for (int q_attempt = 0; q_attempt < 16; ++q_attempt) {
    Nat q = random_prime(q_bits, rng, rounds);

    // k ranges so that p = k*q + 1 has exactly p_bits bits.
    Nat p_lo = Nat(1) << (p_bits - 1);
    Nat p_hi = (Nat(1) << p_bits) - 1;
    Nat k_lo = (p_lo - 1 + q - 1) / q;
    Nat k_hi = (p_hi - 1) / q;
    if (k_lo < 2) k_lo = 2;
    if (k_lo > k_hi) continue;

    for (std::size_t i = 0; i < max_k_attempts; ++i) {
      Nat k = rng.between(k_lo, k_hi);
      if (mpz_odd_p(k.get_mpz_t()) != 0) {
        // kq + 1 must be odd
        if (k == k_hi) continue;
        k += 1;
      }
      Nat p = k * q + 1;
      if (bit_length(p) != p_bits) continue;
      if (!is_probable_prime(p, rounds)) continue;

      Nat cofactor = (p - 1) / q;
      for (int h_attempt = 0; h_attempt < 64; ++h_attempt) {
        Nat h = rng.between(2, p - 2);
        Nat alpha = mod_exp(h, cofactor, p);
        if (alpha != 1) return DlpGroup{p, q, alpha};
      }
    }
  }
  throw Error(Errc::kGenerationFailure, "DLP group search exhausted for " +
                                            std::to_string(p_bits) + "/" +
                                            std::to_string(q_bits) + " bits");
}

bool is_valid_group(const DlpGroup& g, std::size_t p_bits, std::size_t q_bits, int rounds) {
  if (g.p < 5 || g.q < 2) return false;
  if (p_bits != 0 && bit_length(g.p) != p_bits) return false;
  if (q_bits != 0 && bit_length(g.q) != q_bits) return false;
  if (!is_probable_prime(g.p, rounds) || !is_probable_prime(g.q, rounds)) return false;
  if ((g.p - 1) % g.q != 0) return false;
  if (g.alpha <= 1 || g.alpha >= g.p) return false;
  return mod_exp(g.alpha, g.q, g.p) == 1;
}

DlpInstance gen_dlp_instance(const DlpGroup& group, std::uint64_t seed) {
  if (group.q < 2) throw Error(Errc::kDomain, "subgroup order too small");
  Rng rng(seed);
  return make_dlp_instance(group, rng.between(1, group.q - 1));
}

DlpInstance make_dlp_instance(const DlpGroup& group, const Nat& x) {
  if (x < 1 || x >= group.q) throw Error(Errc::kDomain, "secret must lie in [1, q-1]");
  return DlpInstance{group, x, mod_exp(group.alpha, x, group.p)};
}

bool verify_dlp(const Nat& p, const Nat& alpha, const Nat& beta, const Nat& x) {
  if (p < 2 || sgn(alpha) < 0 || sgn(beta) < 0 || sgn(x) < 0) return false;
  if (beta >= p) return false;
  return mod_exp(alpha, x, p) == beta;
}

}  // namespace tcash::nt
