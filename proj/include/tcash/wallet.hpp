#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tcash/bank.hpp"
#include "tcash/blindsig.hpp"
#include "tcash/coinmodel.hpp"
#include "tcash/ledger.hpp"
#include "tcash/profile.hpp"
#include "tcash/rng.hpp"
#include "tcash/transfer.hpp"

namespace tcash::wallet {

enum class WaitOutcome { kConfirmed, kConflict, kTimeout };

std::string_view to_string(WaitOutcome o);

/// What a wallet needs from the P2P network.
class Network {
 public:
  virtual ~Network() = default;
  virtual void broadcast(const coin::CoinInstance& c) = 0;
  /// Blocks (in simulated time) until the transaction is buried at the
  /// confirmation depth, a competing child of its parent is, or time runs out.
  virtual WaitOutcome await_confirmation(const coin::CoinId& coin, const Digest& tx_hash,
                                         const Digest& parent_hash) = 0;
  virtual const ledger::Chain& view() const = 0;
  virtual unsigned confirm_depth() const = 0;
};

/// Spending: between initiate_payment and sign_transfer.
enum class EntryStatus : std::uint8_t { kPending = 0, kConfirmed = 1, kSpending = 2, kSpent = 3 };

std::string_view to_string(EntryStatus s);

struct WalletEntry {
  coin::CoinId coin;
  Nat x;
  bs::PrivateKey sk;
  Digest last_tx_hash{};
  Digest parent_tx_hash{};  // zero for a freshly minted coin
  EntryStatus status = EntryStatus::kPending;
  bool flagged = false;  // confirmation failed; kept for inspection

  bool operator==(const WalletEntry&) const = default;
};

/// sn(32) || x(128) || d(256). The modulus half of sk is public on chain.
inline constexpr std::size_t kSecretCoreSize = 416;
inline constexpr std::size_t kSecretXWidth = 128;

Bytes encode_secret_core(const WalletEntry& e);

/// One persisted entry: secret core, status byte (bit 7 = flagged),
/// last_tx_hash, then the public context needed to rebuild it: val (8),
/// bank (32), parent hash (32) and the transfer modulus (256).
inline constexpr std::size_t kPersistedEntrySize = kSecretCoreSize + 1 + 32 + 8 + 32 + 32 + 256;

class Wallet {
 public:
  Wallet(std::string name, const Profile& profile, std::uint64_t seed);

  const std::string& name() const { return name_; }

  /// Mint exchange with a bank. The new coin is broadcast and stored as
  /// pending. A bank answer that does not unblind to a valid signature
  /// raises Errc::kProtocol and leaves the wallet unchanged.
  const WalletEntry& request_mint(bank::MintService& bank, const std::string& account,
                                  std::uint64_t val, Network& net);

  /// Reveals (coin, x) and moves the entry to spending.
  /// Throws Errc::kState unless the entry is confirmed.
  PaymentOffer initiate_payment(const coin::CoinId& coin);

  /// Signs the payee's blinded digest with the current transfer key; marks
  /// the entry spent. Throws Errc::kDoubleSign on a second request and
  /// Errc::kState if no payment was initiated.
  Nat sign_transfer(const coin::CoinId& coin, const Nat& m_blinded);

  /// Same signature but ignoring the one-signature rule. Used to script a
  /// cheating payer in double-spend experiments.
  Nat sign_conflicting_transfer(const coin::CoinId& coin, const Nat& m_blinded);

  /// Payee side: checks the offer against `view` and returns m' for the payer.
  Nat receive_payment(const PaymentOffer& offer, const ledger::Chain& view, unsigned depth);

  /// Unblinds, verifies and broadcasts; the new entry is pending.
  /// Throws Errc::kProtocol (nothing broadcast) on a bad signature.
  const WalletEntry& submit_receipt(const coin::CoinId& coin, const Nat& s_blinded, Network& net);

  /// Waits for a pending entry. Confirmed entries become spendable; on
  /// conflict or timeout the entry stays pending and is flagged.
  WaitOutcome await_settlement(const coin::CoinId& coin, Network& net);

  /// submit_receipt followed by await_settlement.
  WaitOutcome finalize_receipt(const coin::CoinId& coin, const Nat& s_blinded, Network& net);

  /// Sum of val over confirmed entries (spending ones included until signed).
  std::uint64_t balance() const;

  const WalletEntry* find(const coin::CoinId& coin) const;
  const std::map<coin::CoinId, WalletEntry>& entries() const { return entries_; }
  bool has_pending_receipt(const coin::CoinId& coin) const {
    return receipts_.count(coin) != 0;
  }

  /// Count-prefixed sequence of kPersistedEntrySize records.
  Bytes save() const;
  void load(ByteView bytes);

 private:
  Nat sign_unchecked(WalletEntry& entry, const Nat& m_blinded);

  std::string name_;
  const Profile* profile_;
  Rng rng_;
  std::map<coin::CoinId, WalletEntry> entries_;
  std::map<coin::CoinId, PendingReceipt> receipts_;
};

}  // namespace tcash::wallet
