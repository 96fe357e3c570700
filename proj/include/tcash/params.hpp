#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "tcash/bytes.hpp"
#include "tcash/ledger.hpp"

namespace tcash::ledger {

/// What a verifier needs besides the ledger file itself: the fixed difficulty
/// and every bank's published denomination keys. Written next to the ledger
/// as `<ledger>.params`.
struct ChainParams {
  std::string profile;
  std::uint32_t difficulty = 0;
  BankDirectory banks;
  std::map<Digest, std::string> bank_names;
};

/// Line-oriented text:
///   tcash-params 1
///   profile <name>
///   difficulty <bits>
///   bank <id-hex> <name>
///   key <id-hex> <val> <e-hex> <n-hex>
std::string format_params(const ChainParams& p);

/// Throws Errc::kFormat with the offending line number.
ChainParams parse_params(std::string_view text);

}  // namespace tcash::ledger
