#include "tcash/bank.hpp"

#include "tcash/errors.hpp"

namespace tcash::bank {

void Escrow::credit(std::uint64_t amount) { balance_ += static_cast<std::int64_t>(amount); }

void Escrow::debit(std::uint64_t amount) {
  if (static_cast<std::int64_t>(amount) > balance_) {
    throw Error(Errc::kInsufficientFunds, "escrow cannot cover " + std::to_string(amount));
  }
  balance_ -= static_cast<std::int64_t>(amount);
}

Digest Bank::id_for(std::string_view name) {
  return sha256(ByteView(reinterpret_cast<const std::uint8_t*>(name.data()), name.size()));
}

Bank::Bank(std::string name, const Profile& profile, std::uint64_t seed, Escrow& escrow)
    : name_(std::move(name)),
      id_(id_for(name_)),
      profile_(&profile),
      rng_(seed, "bank-ops"),
      escrow_(&escrow) {
  Rng key_rng(seed, "bank-keys");
  for (std::uint64_t val : coin::kDenominations) {
    keyring_.emplace(val, bs::keygen(profile.rsa_bits, key_rng.next(), profile.rsa_e,
                                     profile.mr_rounds));
  }
}

void Bank::open_account(const std::string& account, std::int64_t balance) {
  if (balance < 0) throw Error(Errc::kDomain, "opening balance must be non-negative");
  if (accounts_.count(account) != 0) throw Error(Errc::kState, "account exists: " + account);
  accounts_.emplace(account, balance);
}

std::int64_t Bank::account_balance(const std::string& account) const {
  auto it = accounts_.find(account);
  if (it == accounts_.end()) throw Error(Errc::kUnknownAccount, account);
  return it->second;
}

ledger::DenominationKeys Bank::publish_keys() const {
  ledger::DenominationKeys out;
  for (const auto& [val, kp] : keyring_) out.emplace(val, kp.pub);
  return out;
}

Nat Bank::mint(const std::string& account, std::uint64_t val, const Nat& m_blinded) {
  auto acct = accounts_.find(account);
  if (acct == accounts_.end()) throw Error(Errc::kUnknownAccount, account);
  auto key = keyring_.find(val);
  if (key == keyring_.end()) throw Error(Errc::kUnknownDenomination, std::to_string(val));
  if (acct->second < static_cast<std::int64_t>(val)) {
    throw Error(Errc::kInsufficientFunds,
                account + " holds " + std::to_string(acct->second) + ", needs " +
                    std::to_string(val));
  }
  // Sign first: a domain error must leave balances untouched.
  Nat s_blinded = bs::sign(m_blinded, key->second.priv);
  acct->second -= static_cast<std::int64_t>(val);
  escrow_->credit(val);
  minted_value_ += val;
  mint_log_.push_back(MintRecord{account, val, now_});
  return s_blinded;
}

RedeemRequest Bank::redeem(const wallet::PaymentOffer& offer, const std::string& account,
                           const ledger::Chain& view, unsigned depth) {
  if (redeemed_.count(offer.coin) != 0) throw Error(Errc::kDoubleRedeem, "coin already redeemed");
  for (const auto& [ticket, pending] : redeeming_) {
    if (pending.coin == offer.coin) throw Error(Errc::kDoubleRedeem, "redemption in progress");
  }
  if (accounts_.count(account) == 0) throw Error(Errc::kUnknownAccount, account);
  auto latest = view.lookup_latest(offer.coin, depth);
  if (!latest) throw Error(Errc::kUnknownCoin, "coin not found on chain");
  if (!nt::verify_dlp(latest->latest.dlp, offer.x)) {
    throw Error(Errc::kOwnership, "revealed secret does not solve the coin's DLP");
  }

  wallet::PendingReceipt receipt = wallet::prepare_receipt(
      offer, latest->latest, wallet::make_owner_secrets(*profile_, rng_), rng_);
  const std::uint64_t ticket = next_ticket_++;
  RedeemRequest request{ticket, receipt.m_blinded};
  redeeming_.emplace(ticket, PendingRedeem{offer.coin, account, std::move(receipt), std::nullopt});
  return request;
}

coin::CoinInstance Bank::complete_redeem(std::uint64_t ticket, const Nat& s_blinded) {
  auto it = redeeming_.find(ticket);
  if (it == redeeming_.end()) throw Error(Errc::kState, "unknown redemption ticket");
  coin::CoinInstance c = wallet::complete_receipt(it->second.receipt, s_blinded);
  it->second.final_tx_hash = coin::tx_hash(c.tx);
  return c;
}

Receipt Bank::settle_redeem(std::uint64_t ticket, const ledger::Chain& view, unsigned depth) {
  auto it = redeeming_.find(ticket);
  if (it == redeeming_.end()) throw Error(Errc::kState, "unknown redemption ticket");
  PendingRedeem& pending = it->second;
  if (!pending.final_tx_hash) throw Error(Errc::kState, "redemption not signed yet");
  auto confirmations = view.confirmations(*pending.final_tx_hash);
  if (!confirmations || *confirmations < depth) {
    throw Error(Errc::kState, "terminal transfer not confirmed");
  }
  auto acct = accounts_.find(pending.account);
  if (acct == accounts_.end()) throw Error(Errc::kUnknownAccount, pending.account);

  const std::uint64_t val = pending.coin.val;
  escrow_->debit(val);
  acct->second += static_cast<std::int64_t>(val);
  redeemed_value_ += val;
  redeemed_.insert(pending.coin);
  Receipt receipt{pending.coin, pending.account, val, *pending.final_tx_hash};
  redeeming_.erase(it);
  return receipt;
}

void Bank::abort_redeem(std::uint64_t ticket) { redeeming_.erase(ticket); }

}  // namespace tcash::bank
