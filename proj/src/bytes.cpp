#include "tcash/bytes.hpp"

#include <openssl/sha.h>

#include <algorithm>

#include "tcash/errors.hpp"

namespace tcash {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kDomain: return "domain error";
    case Errc::kNoInverse: return "no inverse";
    case Errc::kGenerationFailure: return "generation failure";
    case Errc::kEncoding: return "encoding error";
    case Errc::kFormat: return "format error";
    case Errc::kOwnership: return "ownership error";
    case Errc::kInsufficientFunds: return "insufficient funds";
    case Errc::kUnknownDenomination: return "unknown denomination";
    case Errc::kUnknownAccount: return "unknown account";
    case Errc::kUnknownCoin: return "unknown coin";
    case Errc::kDoubleRedeem: return "double redeem";
    case Errc::kProtocol: return "protocol error";
    case Errc::kState: return "state error";
    case Errc::kDoubleSign: return "double-sign refusal";
    case Errc::kProfile: return "profile error";
    case Errc::kScript: return "script error";
    case Errc::kIo: return "i/o error";
  }
  return "unknown error";
}

Digest sha256(ByteView data) {
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest sha256_pair(const Digest& left, const Digest& right) {
  std::array<std::uint8_t, 64> buf{};
  std::copy(left.begin(), left.end(), buf.begin());
  std::copy(right.begin(), right.end(), buf.begin() + 32);
  return sha256(buf);
}

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) throw Error(Errc::kFormat, "odd-length hex string");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::kFormat, "invalid hex digit");
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

Digest digest_from_hex(std::string_view hex) {
  Bytes raw = from_hex(hex);
  if (raw.size() != 32) throw Error(Errc::kFormat, "expected 32-byte hex value");
  Digest d{};
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

bool is_zero(const Digest& d) {
  return std::all_of(d.begin(), d.end(), [](std::uint8_t b) { return b == 0; });
}

std::size_t byte_length(const Nat& value) {
  if (value == 0) return 0;
  return (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
}

void put_nat(Bytes& out, const Nat& value, std::size_t width) {
  if (sgn(value) < 0) throw Error(Errc::kEncoding, "negative value");
  std::size_t len = byte_length(value);
  if (len > width) {
    throw Error(Errc::kEncoding,
                "value of " + std::to_string(len) + " bytes overflows " +
                    std::to_string(width) + "-byte slot");
  }
  std::size_t start = out.size();
  out.resize(start + width, 0);
  if (len > 0) {
    std::size_t written = 0;
    mpz_export(out.data() + start + (width - len), &written, 1, 1, 1, 0,
               value.get_mpz_t());
  }
}

Nat get_nat(ByteView in) {
  Nat out;
  if (!in.empty()) mpz_import(out.get_mpz_t(), in.size(), 1, 1, 1, 0, in.data());
  return out;
}

void put_u64(Bytes& out, std::uint64_t value) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

void put_u32(Bytes& out, std::uint32_t value) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

std::uint64_t get_u64(ByteView in) {
  std::uint64_t v = 0;
  for (std::uint8_t b : in.first(8)) v = (v << 8) | b;
  return v;
}

std::uint32_t get_u32(ByteView in) {
  std::uint32_t v = 0;
  for (std::uint8_t b : in.first(4)) v = (v << 8) | b;
  return v;
}

Digest nat_to_digest(const Nat& value) {
  Bytes buf;
  put_nat(buf, value, 32);
  Digest d{};
  std::copy(buf.begin(), buf.end(), d.begin());
  return d;
}

Nat digest_to_nat(const Digest& d) { return get_nat(d); }

ByteView ByteReader::take(std::size_t n) {
  if (remaining() < n) {
    throw Error(Errc::kFormat, "truncated input at offset " + std::to_string(offset_) +
                                   " (need " + std::to_string(n) + " bytes, have " +
                                   std::to_string(remaining()) + ")");
  }
  ByteView out = data_.subspan(offset_, n);
  offset_ += n;
  return out;
}

Digest ByteReader::digest() {
  ByteView raw = take(32);
  Digest d{};
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

}  // namespace tcash
