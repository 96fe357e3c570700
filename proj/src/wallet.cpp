#include "tcash/wallet.hpp"

#include "tcash/errors.hpp"

namespace tcash::wallet {

std::string_view to_string(WaitOutcome o) {
  switch (o) {
    case WaitOutcome::kConfirmed: return "confirmed";
    case WaitOutcome::kConflict: return "conflict";
    case WaitOutcome::kTimeout: return "timeout";
  }
  return "unknown";
}

std::string_view to_string(EntryStatus s) {
  switch (s) {
    case EntryStatus::kPending: return "pending";
    case EntryStatus::kConfirmed: return "confirmed";
    case EntryStatus::kSpending: return "spending";
    case EntryStatus::kSpent: return "spent";
  }
  return "unknown";
}

Bytes encode_secret_core(const WalletEntry& e) {
  Bytes out;
  out.reserve(kSecretCoreSize);
  out.insert(out.end(), e.coin.sn.begin(), e.coin.sn.end());
  put_nat(out, e.x, kSecretXWidth);
  put_nat(out, e.sk.d, coin::kModulusWidth);
  return out;
}

Wallet::Wallet(std::string name, const Profile& profile, std::uint64_t seed)
    : name_(std::move(name)), profile_(&profile), rng_(seed, "wallet:" + name_) {}

const WalletEntry& Wallet::request_mint(bank::MintService& bank, const std::string& account,
                                        std::uint64_t val, Network& net) {
  ledger::DenominationKeys keys = bank.publish_keys();
  auto pk_val = keys.find(val);
  if (pk_val == keys.end()) throw Error(Errc::kUnknownDenomination, std::to_string(val));

  coin::CoinId id;
  do {
    id.sn = rng_.digest();
  } while (is_zero(id.sn));
  id.val = val;
  id.bank = bank.id();

  OwnerSecrets secrets = make_owner_secrets(*profile_, rng_);
  coin::Transaction tx = coin::make_genesis_tx(id, secrets.dlp.public_part(), secrets.keys.pub);

  const bs::PublicKey& pk = pk_val->second;
  Nat m = bs::digest_to_message(coin::tx_hash(tx), pk.n);
  bs::BlindingFactor r = bs::BlindingFactor::random(pk.n, rng_);
  Nat s_blinded = bank.mint(account, val, bs::blind(m, r, pk));

  if (sgn(s_blinded) < 0 || s_blinded >= pk.n) {
    throw Error(Errc::kProtocol, "bank answer outside the denomination modulus");
  }
  Nat s = bs::unblind(s_blinded, r, pk.n);
  if (!bs::verify(s, m, pk)) {
    throw Error(Errc::kProtocol, "bank signature does not verify under pk_val");
  }

  coin::CoinInstance instance{tx, s};
  net.broadcast(instance);

  WalletEntry entry{id, secrets.dlp.x, secrets.keys.priv, coin::tx_hash(tx), Digest{},
                    EntryStatus::kPending, false};
  auto [it, inserted] = entries_.insert_or_assign(id, std::move(entry));
  return it->second;
}

PaymentOffer Wallet::initiate_payment(const coin::CoinId& coin) {
  auto it = entries_.find(coin);
  if (it == entries_.end()) throw Error(Errc::kUnknownCoin, "wallet does not hold this coin");
  WalletEntry& e = it->second;
  if (e.status != EntryStatus::kConfirmed) {
    throw Error(Errc::kState, std::string("cannot spend a ") + std::string(to_string(e.status)) +
                                  " coin");
  }
  e.status = EntryStatus::kSpending;
  return PaymentOffer{e.coin, e.x};
}

Nat Wallet::sign_unchecked(WalletEntry& entry, const Nat& m_blinded) {
  Nat s = bs::sign(m_blinded, entry.sk);
  entry.status = EntryStatus::kSpent;
  return s;
}

Nat Wallet::sign_transfer(const coin::CoinId& coin, const Nat& m_blinded) {
  auto it = entries_.find(coin);
  if (it == entries_.end()) throw Error(Errc::kUnknownCoin, "wallet does not hold this coin");
  WalletEntry& e = it->second;
  if (e.status == EntryStatus::kSpent) throw Error(Errc::kDoubleSign, "coin already signed away");
  if (e.status != EntryStatus::kSpending) throw Error(Errc::kState, "no payment in progress");
  return sign_unchecked(e, m_blinded);
}

Nat Wallet::sign_conflicting_transfer(const coin::CoinId& coin, const Nat& m_blinded) {
  auto it = entries_.find(coin);
  if (it == entries_.end()) throw Error(Errc::kUnknownCoin, "wallet does not hold this coin");
  return sign_unchecked(it->second, m_blinded);
}

Nat Wallet::receive_payment(const PaymentOffer& offer, const ledger::Chain& view,
                            unsigned depth) {
  PendingReceipt pending = prepare_receipt(offer, view, depth, *profile_, rng_);
  Nat m_blinded = pending.m_blinded;
  receipts_.insert_or_assign(offer.coin, std::move(pending));
  return m_blinded;
}

const WalletEntry& Wallet::submit_receipt(const coin::CoinId& coin, const Nat& s_blinded,
                                          Network& net) {
  auto it = receipts_.find(coin);
  if (it == receipts_.end()) throw Error(Errc::kState, "no receipt in progress for coin");
  coin::CoinInstance instance = complete_receipt(it->second, s_blinded);
  net.broadcast(instance);

  const PendingReceipt& pending = it->second;
  WalletEntry entry{coin,
                    pending.secrets.dlp.x,
                    pending.secrets.keys.priv,
                    coin::tx_hash(instance.tx),
                    instance.tx.h_prev,
                    EntryStatus::kPending,
                    false};
  receipts_.erase(it);
  auto [pos, inserted] = entries_.insert_or_assign(coin, std::move(entry));
  return pos->second;
}

WaitOutcome Wallet::await_settlement(const coin::CoinId& coin, Network& net) {
  auto it = entries_.find(coin);
  if (it == entries_.end()) throw Error(Errc::kUnknownCoin, "wallet does not hold this coin");
  WalletEntry& e = it->second;
  if (e.status != EntryStatus::kPending) return WaitOutcome::kConfirmed;
  WaitOutcome outcome = net.await_confirmation(coin, e.last_tx_hash, e.parent_tx_hash);
  if (outcome == WaitOutcome::kConfirmed) {
    e.status = EntryStatus::kConfirmed;
    e.flagged = false;
  } else {
    e.flagged = true;
  }
  return outcome;
}

WaitOutcome Wallet::finalize_receipt(const coin::CoinId& coin, const Nat& s_blinded,
                                     Network& net) {
  submit_receipt(coin, s_blinded, net);
  return await_settlement(coin, net);
}

std::uint64_t Wallet::balance() const {
  std::uint64_t total = 0;
  for (const auto& [id, e] : entries_) {
    if (e.status == EntryStatus::kConfirmed || e.status == EntryStatus::kSpending) {
      total += id.val;
    }
  }
  return total;
}

const WalletEntry* Wallet::find(const coin::CoinId& coin) const {
  auto it = entries_.find(coin);
  return it == entries_.end() ? nullptr : &it->second;
}

Bytes Wallet::save() const {
  Bytes out;
  put_u32(out, static_cast<std::uint32_t>(entries_.size()));
  for (const auto& [id, e] : entries_) {
    Bytes core = encode_secret_core(e);
    out.insert(out.end(), core.begin(), core.end());
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint8_t>(e.status) |
                                            (e.flagged ? 0x80 : 0x00)));
    out.insert(out.end(), e.last_tx_hash.begin(), e.last_tx_hash.end());
    put_u64(out, id.val);
    out.insert(out.end(), id.bank.begin(), id.bank.end());
    out.insert(out.end(), e.parent_tx_hash.begin(), e.parent_tx_hash.end());
    put_nat(out, e.sk.n, coin::kModulusWidth);
  }
  return out;
}

void Wallet::load(ByteView bytes) {
  ByteReader in(bytes);
  const std::uint32_t count = in.u32();
  if (in.remaining() != static_cast<std::size_t>(count) * kPersistedEntrySize) {
    throw Error(Errc::kFormat, "wallet file length does not match its entry count");
  }
  std::map<coin::CoinId, WalletEntry> loaded;
  for (std::uint32_t i = 0; i < count; ++i) {
    WalletEntry e;
    e.coin.sn = in.digest();
    e.x = in.nat(kSecretXWidth);
    e.sk.d = in.nat(coin::kModulusWidth);
    const std::uint8_t status = in.take(1)[0];
    if ((status & 0x7f) > static_cast<std::uint8_t>(EntryStatus::kSpent)) {
      throw Error(Errc::kFormat, "bad wallet entry status");
    }
    e.status = static_cast<EntryStatus>(status & 0x7f);
    e.flagged = (status & 0x80) != 0;
    e.last_tx_hash = in.digest();
    e.coin.val = in.u64();
    e.coin.bank = in.digest();
    e.parent_tx_hash = in.digest();
    e.sk.n = in.nat(coin::kModulusWidth);
    loaded.insert_or_assign(e.coin, std::move(e));
  }
  entries_ = std::move(loaded);
}

}  // namespace tcash::wallet
