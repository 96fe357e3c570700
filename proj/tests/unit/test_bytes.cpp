#include <gtest/gtest.h>

#include <random>
#include <string>

#include "tcash/bytes.hpp"
#include "tcash/errors.hpp"
#include "tcash/profile.hpp"
#include "tcash/rng.hpp"

using namespace tcash;

namespace {

ByteView view(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

// Expected digests were produced with Python's hashlib.
TEST(Sha256, MatchesReferenceDigests) {
  EXPECT_EQ(to_hex(sha256(view(""))),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(to_hex(sha256(view("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(to_hex(sha256_pair(Digest{}, Digest{})),
            "f5a5fd42d16a20302798ef6ed309979b43003d2320d9f0e8ea9831a92759fb4b");
}

TEST(Hex, RoundTripAndRejects) {
  Bytes b = {0x00, 0x7f, 0xff, 0x10};
  EXPECT_EQ(to_hex(b), "007fff10");
  EXPECT_EQ(from_hex("007FFF10"), b);
  EXPECT_THROW(from_hex("abc"), Error);
  EXPECT_THROW(from_hex("zz"), Error);
  EXPECT_THROW(digest_from_hex("00"), Error);
}

TEST(FixedWidth, BigEndianPadding) {
  Bytes out;
  put_nat(out, Nat(0x0102), 4);
  EXPECT_EQ(out, (Bytes{0, 0, 1, 2}));
  EXPECT_EQ(get_nat(out), 0x0102);

  out.clear();
  put_u64(out, 0x0102030405060708ULL);
  put_u32(out, 0xA0B0C0D0u);
  EXPECT_EQ(to_hex(out), "0102030405060708a0b0c0d0");
  EXPECT_EQ(get_u64(ByteView(out).first(8)), 0x0102030405060708ULL);
  EXPECT_EQ(get_u32(ByteView(out).subspan(8)), 0xA0B0C0D0u);
}

TEST(FixedWidth, OverflowThrows) {
  Bytes out;
  Nat big = Nat(1) << 32;
  try {
    put_nat(out, big, 4);
    FAIL() << "expected overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEncoding);
  }
  EXPECT_NO_THROW(put_nat(out, big - 1, 4));
}

TEST(FixedWidth, ByteLength) {
  EXPECT_EQ(byte_length(Nat(0)), 0u);
  EXPECT_EQ(byte_length(Nat(255)), 1u);
  EXPECT_EQ(byte_length(Nat(256)), 2u);
  EXPECT_EQ(byte_length(Nat(1) << 2047), 256u);
}

TEST(FixedWidth, DigestNatRoundTrip) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    Digest d = rng.digest();
    EXPECT_EQ(nat_to_digest(digest_to_nat(d)), d);
  }
}

TEST(ByteReader, TruncationIsAFormatError) {
  Bytes b = {1, 2, 3};
  ByteReader r(b);
  EXPECT_EQ(r.take(2).size(), 2u);
  try {
    r.u32();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kFormat);
  }
}

TEST(Rng, DeriveSeedMatchesHashOracle) {
  // First eight bytes of sha256(be64(42) || "bank-keys"), computed in Python.
  EXPECT_EQ(Rng::derive_seed(42, "bank-keys"), 2590077637237291714ULL);
}

TEST(Rng, EngineSequenceIsTheStandardOne) {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the C++ standard.
  Rng rng(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  Rng rng(9);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto v = rng.below(std::uint64_t{7});
    ASSERT_LT(v, 7u);
    ++seen[v];
  }
  for (int c : seen) EXPECT_GT(c, 800);

  Nat bound("100000000000000000000000000000");
  for (int i = 0; i < 200; ++i) {
    Nat v = rng.below(bound);
    EXPECT_GE(v, 0);
    EXPECT_LT(v, bound);
  }
  EXPECT_THROW(rng.below(std::uint64_t{0}), Error);
}

TEST(Rng, BetweenIsInclusive) {
  Rng rng(3);
  bool lo = false, hi = false;
  for (int i = 0; i < 500; ++i) {
    Nat v = rng.between(10, 12);
    ASSERT_GE(v, 10);
    ASSERT_LE(v, 12);
    lo |= v == 10;
    hi |= v == 12;
  }
  EXPECT_TRUE(lo && hi);
}

TEST(Profile, LookupByName) {
  EXPECT_EQ(profile_by_name("TOY").rsa_bits, kToyProfile.rsa_bits);
  EXPECT_EQ(profile_by_name("standard").rsa_bits, 2048u);
  EXPECT_EQ(kStandardProfile.dlp_p_bits, 1024u);
  EXPECT_EQ(kStandardProfile.dlp_q_bits, 256u);
  EXPECT_THROW(profile_by_name("huge"), Error);
}
