#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>

#include "tcash/blindsig.hpp"
#include "tcash/bytes.hpp"
#include "tcash/numtheory.hpp"

namespace tcash::coin {

// Fixed slot widths in bytes, in wire order.
inline constexpr std::size_t kSnWidth = 32;
inline constexpr std::size_t kValWidth = 32;
inline constexpr std::size_t kBankWidth = 32;
inline constexpr std::size_t kDlpWidth = 128;
inline constexpr std::size_t kModulusWidth = 256;
inline constexpr std::size_t kExponentWidth = 32;
inline constexpr std::size_t kSecretWidth = 32;
inline constexpr std::size_t kHashWidth = 32;
inline constexpr std::size_t kSignatureWidth = 256;

inline constexpr std::size_t kTxSize = kSnWidth + kValWidth + kBankWidth + 3 * kDlpWidth +
                                       kModulusWidth + kExponentWidth + kSecretWidth +
                                       kHashWidth;
inline constexpr std::size_t kInstanceSize = kTxSize + kSignatureWidth;

static_assert(kTxSize == 832);
static_assert(kInstanceSize == 1088);

/// Denominations in cents: $1, $5, $10.
inline constexpr std::uint64_t kDenominations[] = {100, 500, 1000};

bool is_denomination(std::uint64_t val);

/// (sn, val, bank) - the index of a coin on chain.
struct CoinId {
  Digest sn{};
  std::uint64_t val = 0;
  Digest bank{};

  auto operator<=>(const CoinId&) const = default;
  bool operator==(const CoinId&) const = default;
};

struct Transaction {
  CoinId coin;
  nt::DlpPublic dlp;
  bs::PublicKey transfer_pk;
  Nat x_prev;    // zero for the first transaction of a coin
  Digest h_prev{};  // zero for the first transaction of a coin

  bool is_genesis() const { return x_prev == 0 && is_zero(h_prev); }
  bool operator==(const Transaction&) const = default;
};

struct CoinInstance {
  Transaction tx;
  Nat sig;

  bool operator==(const CoinInstance&) const = default;
};

/// Big-endian fixed-width concatenation: sn, val, bank, p, alpha, beta, n, e,
/// x_prev, h_prev. Always kTxSize bytes. Throws Errc::kEncoding on overflow.
Bytes serialize_tx(const Transaction& tx);
void append_tx(Bytes& out, const Transaction& tx);

/// Throws Errc::kFormat on wrong length or a val that overflows 64 bits.
Transaction deserialize_tx(ByteView bytes);

Digest tx_hash(const Transaction& tx);

/// Transaction encoding followed by the 256-byte signature slot.
Bytes serialize_instance(const CoinInstance& c);
void append_instance(Bytes& out, const CoinInstance& c);
CoinInstance deserialize_instance(ByteView bytes);

/// Hash of the full instance encoding (Merkle leaf).
Digest instance_hash(const CoinInstance& c);

/// Throws Errc::kDomain for sn == 0 and Errc::kUnknownDenomination for val.
Transaction make_genesis_tx(const CoinId& coin, const nt::DlpPublic& dlp,
                            const bs::PublicKey& transfer_pk);

/// Next link of the chain, built by the payee. Throws Errc::kOwnership unless
/// `revealed_x` solves the DLP published in `prev`.
Transaction make_transfer_tx(const Transaction& prev, const Nat& revealed_x,
                             const nt::DlpPublic& new_dlp, const bs::PublicKey& new_pk);

/// Context-free checks only: slot bounds, denomination, genesis-null
/// coupling, key shape. Signatures and chain context are not examined.
bool validate_syntactic(const CoinInstance& c);

}  // namespace tcash::coin
