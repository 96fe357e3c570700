#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace tcash {

/// Arbitrary-precision non-negative integer. GMP keeps the representation
/// canonical (no leading zero limbs).
using Nat = mpz_class;

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// 256-bit digest or identifier.
using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteView data);
Digest sha256_pair(const Digest& left, const Digest& right);

std::string to_hex(ByteView data);
inline std::string to_hex(const Digest& d) { return to_hex(ByteView(d)); }
Bytes from_hex(std::string_view hex);
Digest digest_from_hex(std::string_view hex);

bool is_zero(const Digest& d);

/// Appends `value` as a big-endian unsigned integer padded to `width` bytes.
/// Throws Errc::kEncoding when the value does not fit.
void put_nat(Bytes& out, const Nat& value, std::size_t width);
Nat get_nat(ByteView in);

void put_u64(Bytes& out, std::uint64_t value);
void put_u32(Bytes& out, std::uint32_t value);
std::uint64_t get_u64(ByteView in);
std::uint32_t get_u32(ByteView in);

/// Big-endian byte width of `value` (0 for zero).
std::size_t byte_length(const Nat& value);

Digest nat_to_digest(const Nat& value);
Nat digest_to_nat(const Digest& d);

/// Sequential reader over a byte buffer; throws Errc::kFormat on underrun.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  ByteView take(std::size_t n);
  Nat nat(std::size_t width) { return get_nat(take(width)); }
  std::uint64_t u64() { return get_u64(take(8)); }
  std::uint32_t u32() { return get_u32(take(4)); }
  Digest digest();

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return data_.size() - offset_; }
  bool done() const { return offset_ == data_.size(); }

 private:
  ByteView data_;
  std::size_t offset_ = 0;
};

}  // namespace tcash
