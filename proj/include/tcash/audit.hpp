#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tcash/bytes.hpp"
#include "tcash/coinmodel.hpp"
#include "tcash/params.hpp"

namespace tcash::audit {

/// One verified link in a coin's chain of custody.
struct Hop {
  std::size_t block = 0;
  std::size_t instance = 0;
  Digest tx_hash{};
  bool genesis = false;
  bool linkage_ok = false;
  bool dlp_ok = false;
  bool sig_ok = false;
};

struct Custody {
  coin::CoinId coin;
  std::vector<Hop> hops;
};

struct Violation {
  std::size_t block = 0;
  std::optional<std::size_t> instance;
  std::string rule;
};

struct AuditReport {
  std::size_t blocks = 0;
  std::size_t instances = 0;
  std::vector<Custody> coins;  // in order of first appearance
  std::optional<Violation> violation;

  bool valid() const { return !violation.has_value(); }
  const Custody* find(const coin::CoinId& id) const;
};

/// Re-verifies a ledger file from its bytes alone: header layout, genesis
/// block, prev linkage, difficulty, proof of work, Merkle roots, and every
/// instance's DLP reveal, parent hash and signature. Stops at the first
/// violation; custody gathered up to that point is kept.
AuditReport audit_ledger(ByteView ledger, const ledger::ChainParams& params);

std::string format_custody(const Custody& c);
std::string format_report(const AuditReport& r);

}  // namespace tcash::audit
