#include "tcash/rng.hpp"

#include "tcash/errors.hpp"

namespace tcash {

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::string_view label) {
  Bytes buf;
  put_u64(buf, seed);
  buf.insert(buf.end(), label.begin(), label.end());
  Digest d = sha256(buf);
  return get_u64(d);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(Errc::kDomain, "empty range");
  // Rejection sampling keeps the result unbiased.
  std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % bound;
}

Nat Rng::bits(std::size_t n) {
  Nat out = 0;
  std::size_t remaining = n;
  while (remaining >= 64) {
    out <<= 64;
    std::uint64_t word = next();
    out += Nat(static_cast<unsigned long>(word >> 32)) << 32;
    out += static_cast<unsigned long>(word & 0xffffffffu);
    remaining -= 64;
  }
  if (remaining > 0) {
    out <<= remaining;
    std::uint64_t word = next() >> (64 - remaining);
    out += Nat(static_cast<unsigned long>(word >> 32)) << 32;
    out += static_cast<unsigned long>(word & 0xffffffffu);
  }
  return out;
}

Nat Rng::below(const Nat& bound) {
  if (bound <= 0) throw Error(Errc::kDomain, "empty range");
  std::size_t width = mpz_sizeinbase(bound.get_mpz_t(), 2);
  Nat v;
  do {
    v = bits(width);
  } while (v >= bound);
  return v;
}

Nat Rng::between(const Nat& lo, const Nat& hi) {
  if (lo > hi) throw Error(Errc::kDomain, "empty range");
  Nat span = hi - lo + 1;
  return lo + below(span);
}

Digest Rng::digest() {
  Digest d{};
  for (std::size_t i = 0; i < d.size(); i += 8) {
    std::uint64_t w = next();
    for (std::size_t j = 0; j < 8; ++j) d[i + j] = static_cast<std::uint8_t>(w >> (56 - 8 * j));
  }
  return d;
}

}  // namespace tcash
