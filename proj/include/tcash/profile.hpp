#pragma once

#include <cstddef>
#include <string_view>

namespace tcash {

/// Key and group sizes. STANDARD matches the on-chain slot widths; TOY keeps
/// test suites fast while still fitting a 256-bit digest under the modulus.
struct Profile {
  std::string_view name;
  std::size_t dlp_p_bits;
  std::size_t dlp_q_bits;
  std::size_t rsa_bits;
  unsigned long rsa_e;
  int mr_rounds;
};

inline constexpr Profile kToyProfile{"toy", 64, 32, 320, 17, 40};
inline constexpr Profile kStandardProfile{"standard", 1024, 256, 2048, 65537, 40};

/// Accepts "toy" or "standard" (case-insensitive); throws Errc::kProfile.
const Profile& profile_by_name(std::string_view name);

}  // namespace tcash
