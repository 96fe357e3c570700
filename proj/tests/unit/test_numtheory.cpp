#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "tcash/errors.hpp"
#include "tcash/numtheory.hpp"
#include "tcash/profile.hpp"

using namespace tcash;
using namespace tcash::nt;

namespace {

// Independent oracles: repeated multiplication, trial division, exhaustive
// search for inverses.
std::uint64_t naive_pow(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  for (std::uint64_t i = 0; i < e; ++i) r = r * (b % m) % m;
  return r;
}

bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::int64_t brute_inverse(std::int64_t a, std::int64_t m) {
  for (std::int64_t b = 1; b < m; ++b) {
    if ((a * b) % m == 1) return b;
  }
  return -1;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return Errc::kDomain;
}

}  // namespace

TEST(ModExp, Examples) {
  EXPECT_EQ(mod_exp(2, 10, 1000), 24);
  EXPECT_EQ(mod_exp(3, 0, 7), 1);
  EXPECT_EQ(code_of([] { mod_exp(5, 3, 1); }), Errc::kDomain);
}

TEST(ModExp, AgreesWithRepeatedMultiplication) {
  for (std::uint64_t m = 2; m < 60; ++m) {
    for (std::uint64_t b = 0; b < 30; ++b) {
      for (std::uint64_t e = 0; e < 25; ++e) {
        ASSERT_EQ(mod_exp(b, e, m), naive_pow(b, e, m)) << b << "^" << e << " mod " << m;
      }
    }
  }
}

TEST(ModExp, ProductRule) {
  Rng rng(11);
  Nat m = (Nat(1) << 127) - 1;
  for (int i = 0; i < 50; ++i) {
    Nat a = rng.below(m), b = rng.below(m), e = rng.bits(64);
    EXPECT_EQ(mod_exp(a * b, e, m), mod_exp(a, e, m) * mod_exp(b, e, m) % m);
  }
}

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(3, 7), 5);
  EXPECT_EQ(code_of([] { mod_inverse(6, 9); }), Errc::kNoInverse);
}

TEST(ModInverse, AgreesWithExhaustiveSearch) {
  for (std::int64_t m = 2; m < 120; ++m) {
    for (std::int64_t a = 1; a < m; ++a) {
      std::int64_t want = brute_inverse(a, m);
      if (want < 0) {
        EXPECT_THROW(mod_inverse(a, m), Error);
      } else {
        ASSERT_EQ(mod_inverse(a, m), want);
      }
    }
  }
}

TEST(Primality, Examples) {
  EXPECT_TRUE(is_probable_prime(2));
  EXPECT_FALSE(is_probable_prime(561));  // Carmichael
  EXPECT_TRUE(is_probable_prime(Nat("170141183460469231731687303715884105727")));  // 2^127-1
}

TEST(Primality, AgreesWithTrialDivisionBelow100000) {
  for (std::uint64_t n = 0; n < 100000; ++n) {
    ASSERT_EQ(is_probable_prime(n), trial_prime(n)) << n;
  }
}

TEST(Primality, StrongPseudoprimesAndCarmichaels) {
  for (const char* n : {"2047", "1373653", "25326001", "3215031751", "2152302898747",
                        "3474749660383", "341550071728321", "3825123056546413051",
                        "318665857834031151167461", "41041", "825265", "321197185"}) {
    EXPECT_FALSE(is_probable_prime(Nat(n))) << n;
  }
  // Products of two large primes are caught on the randomized path.
  Nat p("170141183460469231731687303715884105727");
  EXPECT_FALSE(is_probable_prime(p * p));
  EXPECT_FALSE(is_probable_prime(p * Nat("2305843009213693951")));
}

TEST(RandomPrime, ExactBitLength) {
  Rng rng(4);
  for (std::size_t bits : {8u, 16u, 32u, 64u, 160u}) {
    Nat p = random_prime(bits, rng);
    EXPECT_EQ(mpz_sizeinbase(p.get_mpz_t(), 2), bits);
    EXPECT_TRUE(is_probable_prime(p));
  }
}

TEST(DlpGroup, HandBuiltGroupPassesChecks) {
  DlpGroup g{23, 11, 2};
  EXPECT_TRUE(is_valid_group(g));
  EXPECT_EQ(mod_exp(2, 11, 23), 1);
  EXPECT_FALSE(is_valid_group(DlpGroup{23, 11, 1}));
  EXPECT_FALSE(is_valid_group(DlpGroup{23, 11, 5}));  // 5 has order 22
  EXPECT_FALSE(is_valid_group(DlpGroup{23, 7, 2}));
}

TEST(DlpGroup, GeneratedToyGroupsSatisfyInvariants) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    DlpGroup g = gen_dlp_group(kToyProfile.dlp_p_bits, kToyProfile.dlp_q_bits, seed);
    EXPECT_TRUE(is_probable_prime(g.q));
    EXPECT_TRUE(is_probable_prime(g.p));
    EXPECT_EQ((g.p - 1) % g.q, 0);
    EXPECT_NE(g.alpha, 1);
    EXPECT_EQ(mod_exp(g.alpha, g.q, g.p), 1);
    EXPECT_TRUE(is_valid_group(g, 64, 32));
  }
}

TEST(DlpGroup, DeterministicInSeed) {
  EXPECT_EQ(gen_dlp_group(64, 32, 7), gen_dlp_group(64, 32, 7));
  EXPECT_NE(gen_dlp_group(64, 32, 7), gen_dlp_group(64, 32, 8));
}

TEST(DlpGroup, RejectsInvertedSizes) {
  EXPECT_EQ(code_of([] { gen_dlp_group(32, 32, 1); }), Errc::kDomain);
}

TEST(DlpInstance, SolvesAndVerifies) {
  DlpGroup g{23, 11, 2};
  DlpInstance inst = make_dlp_instance(g, 3);
  EXPECT_EQ(inst.beta, 8);
  EXPECT_TRUE(verify_dlp(inst.public_part(), 3));
  EXPECT_FALSE(verify_dlp(inst.public_part(), 4));
  EXPECT_EQ(code_of([&] { make_dlp_instance(g, 0); }), Errc::kDomain);
  EXPECT_EQ(code_of([&] { make_dlp_instance(g, 11); }), Errc::kDomain);
}

TEST(DlpInstance, SoundInSmallGroup) {
  // In the order-11 subgroup only one exponent in [1, 10] hits each beta.
  DlpGroup g{23, 11, 2};
  for (int x = 1; x < 11; ++x) {
    DlpInstance inst = make_dlp_instance(g, x);
    for (int y = 1; y < 11; ++y) EXPECT_EQ(verify_dlp(inst.public_part(), y), x == y);
  }
}

TEST(DlpInstance, GeneratedSecretsInRange) {
  DlpGroup g = gen_dlp_group(64, 32, 3);
  for (std::uint64_t s = 0; s < 30; ++s) {
    DlpInstance inst = gen_dlp_instance(g, s);
    EXPECT_GE(inst.x, 1);
    EXPECT_LT(inst.x, g.q);
    EXPECT_TRUE(verify_dlp(inst.public_part(), inst.x));
  }
}

TEST(DlpInstance, MalformedInputsAreFalse) {
  EXPECT_FALSE(verify_dlp(23, 2, 30, 3));
  EXPECT_FALSE(verify_dlp(1, 2, 0, 3));
}
