#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tcash/blindsig.hpp"
#include "tcash/coinmodel.hpp"
#include "tcash/ledger.hpp"
#include "tcash/profile.hpp"
#include "tcash/rng.hpp"
#include "tcash/transfer.hpp"

namespace tcash::bank {

/// Shared fiat pool backing every outstanding coin, across all banks.
class Escrow {
 public:
  std::int64_t balance() const { return balance_; }
  void credit(std::uint64_t amount);
  /// Throws Errc::kInsufficientFunds rather than going negative.
  void debit(std::uint64_t amount);

 private:
  std::int64_t balance_ = 0;
};

/// Everything a bank keeps about a mint: no function of the coin itself.
struct MintRecord {
  std::string account;
  std::uint64_t val = 0;
  std::uint64_t timestamp = 0;

  bool operator==(const MintRecord&) const = default;
};

/// The request/response surface of minting: (account, val, m') -> s'.
class MintService {
 public:
  virtual ~MintService() = default;
  virtual const Digest& id() const = 0;
  virtual ledger::DenominationKeys publish_keys() const = 0;
  virtual Nat mint(const std::string& account, std::uint64_t val, const Nat& m_blinded) = 0;
};

struct RedeemRequest {
  std::uint64_t ticket = 0;
  Nat m_blinded;
};

struct Receipt {
  coin::CoinId coin;
  std::string account;
  std::uint64_t val = 0;
  Digest final_tx_hash{};
};

class Bank final : public MintService {
 public:
  /// One signing keypair per configured denomination, derived from `seed`.
  Bank(std::string name, const Profile& profile, std::uint64_t seed, Escrow& escrow);

  /// 256-bit institution identifier derived from a bank name.
  static Digest id_for(std::string_view name);

  const std::string& name() const { return name_; }
  const Digest& id() const override { return id_; }

  void open_account(const std::string& account, std::int64_t balance);
  std::int64_t account_balance(const std::string& account) const;
  bool has_account(const std::string& account) const { return accounts_.count(account) != 0; }

  ledger::DenominationKeys publish_keys() const override;

  /// Debits the account, credits escrow and signs m' under sk_val.
  /// Throws Errc::kUnknownAccount, Errc::kUnknownDenomination or
  /// Errc::kInsufficientFunds with no state change.
  Nat mint(const std::string& account, std::uint64_t val, const Nat& m_blinded) override;

  void set_time(std::uint64_t t) { now_ = t; }
  const std::vector<MintRecord>& mint_log() const { return mint_log_; }

  /// Redemption is a regular transfer with the bank as payee. This first
  /// step checks the offer and returns m' for the owner to sign. Throws
  /// Errc::kDoubleRedeem, Errc::kUnknownCoin, Errc::kOwnership or
  /// Errc::kUnknownAccount, all before any state change.
  RedeemRequest redeem(const wallet::PaymentOffer& offer, const std::string& account,
                       const ledger::Chain& view, unsigned depth);

  /// Unblinds the owner's signature into the terminal instance to broadcast.
  coin::CoinInstance complete_redeem(std::uint64_t ticket, const Nat& s_blinded);

  /// Once the terminal instance is confirmed on `view`, credits the account
  /// from escrow. Throws Errc::kState while unconfirmed.
  Receipt settle_redeem(std::uint64_t ticket, const ledger::Chain& view, unsigned depth);

  void abort_redeem(std::uint64_t ticket);

  bool is_redeemed(const coin::CoinId& coin) const { return redeemed_.count(coin) != 0; }
  std::uint64_t minted_value() const { return minted_value_; }
  std::uint64_t redeemed_value() const { return redeemed_value_; }

 private:
  struct PendingRedeem {
    coin::CoinId coin;
    std::string account;
    wallet::PendingReceipt receipt;
    std::optional<Digest> final_tx_hash;
  };

  std::string name_;
  Digest id_;
  const Profile* profile_;
  Rng rng_;
  Escrow* escrow_;
  std::map<std::uint64_t, bs::KeyPair> keyring_;
  std::map<std::string, std::int64_t> accounts_;
  std::vector<MintRecord> mint_log_;
  std::uint64_t now_ = 0;

  std::map<std::uint64_t, PendingRedeem> redeeming_;
  std::set<coin::CoinId> redeemed_;
  std::uint64_t next_ticket_ = 1;
  std::uint64_t minted_value_ = 0;
  std::uint64_t redeemed_value_ = 0;
};

}  // namespace tcash::bank
