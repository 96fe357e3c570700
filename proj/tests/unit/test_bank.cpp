#include <gtest/gtest.h>

#include "support.hpp"
#include "tcash/bank.hpp"
#include "tcash/errors.hpp"

using namespace tcash;
using namespace tcash::bank;

namespace {

constexpr std::uint32_t kDiff = 8;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return Errc::kDomain;
}

// Owner side of a mint, done by hand so the bank is exercised on its own.
fixture::Owned blind_mint(Bank& bank, const std::string& account, std::uint64_t val, Rng& rng) {
  fixture::Owned o{{}, wallet::make_owner_secrets(kToyProfile, rng)};
  coin::CoinId id{rng.digest(), val, bank.id()};
  o.instance.tx = coin::make_genesis_tx(id, o.secrets.dlp.public_part(), o.secrets.keys.pub);
  const bs::PublicKey pk = bank.publish_keys().at(val);
  Nat m = bs::digest_to_message(coin::tx_hash(o.instance.tx), pk.n);
  auto r = bs::BlindingFactor::random(pk.n, rng);
  Nat s = bs::unblind(bank.mint(account, val, bs::blind(m, r, pk)), r, pk.n);
  EXPECT_TRUE(bs::verify(s, m, pk));
  o.instance.sig = s;
  return o;
}

struct World {
  Escrow escrow;
  Bank bank{"acme", kToyProfile, 42, escrow};
  ledger::Chain chain{kDiff};
  Rng rng{9};

  World() { chain.register_bank(bank.id(), bank.publish_keys()); }

  void confirm(const coin::CoinInstance& c) {
    ASSERT_TRUE(chain.append_block(fixture::seal_on(chain.tip(), {c}, kDiff, chain.height() + 1))
                    .accepted);
  }
};

}  // namespace

TEST(BankId, IsHashOfName) {
  // hashlib.sha256(b"acme").hexdigest()
  EXPECT_EQ(to_hex(Bank::id_for("acme")),
            "822b33ad87c148a0a20a5ba7cd5ebcaa68d36a18e7aad165554903f52ca82757");
}

TEST(Keys, OnePerDenominationAndDeterministic) {
  Escrow e;
  Bank a("acme", kToyProfile, 42, e), b("acme", kToyProfile, 42, e), c("acme", kToyProfile, 43, e);
  auto ka = a.publish_keys();
  ASSERT_EQ(ka.size(), 3u);
  for (std::uint64_t v : coin::kDenominations) {
    EXPECT_EQ(mpz_sizeinbase(ka.at(v).n.get_mpz_t(), 2), kToyProfile.rsa_bits);
  }
  EXPECT_NE(ka.at(100).n, ka.at(500).n);
  EXPECT_EQ(ka, b.publish_keys());
  EXPECT_NE(ka, c.publish_keys());
}

TEST(Mint, DebitsAccountCreditsEscrowAndLogsOnlyMetadata) {
  World w;
  w.bank.open_account("alice", 1500);
  w.bank.set_time(7);
  auto coin = blind_mint(w.bank, "alice", 1000, w.rng);
  EXPECT_EQ(w.bank.account_balance("alice"), 500);
  EXPECT_EQ(w.escrow.balance(), 1000);
  EXPECT_EQ(w.bank.minted_value(), 1000u);
  ASSERT_EQ(w.bank.mint_log().size(), 1u);
  EXPECT_EQ(w.bank.mint_log()[0], (MintRecord{"alice", 1000, 7}));
  EXPECT_FALSE(ledger::validate_coin_instance(coin.instance, {}, w.chain.banks()));
}

TEST(Mint, FailuresChangeNothing) {
  World w;
  w.bank.open_account("alice", 300);
  Nat mb = 12345;
  EXPECT_EQ(code_of([&] { w.bank.mint("alice", 500, mb); }), Errc::kInsufficientFunds);
  EXPECT_EQ(code_of([&] { w.bank.mint("bob", 100, mb); }), Errc::kUnknownAccount);
  EXPECT_EQ(code_of([&] { w.bank.mint("alice", 250, mb); }), Errc::kUnknownDenomination);
  EXPECT_EQ(w.bank.account_balance("alice"), 300);
  EXPECT_EQ(w.escrow.balance(), 0);
  EXPECT_TRUE(w.bank.mint_log().empty());
}

TEST(Escrow, CannotGoNegative) {
  Escrow e;
  e.credit(100);
  EXPECT_EQ(code_of([&] { e.debit(101); }), Errc::kInsufficientFunds);
  EXPECT_EQ(e.balance(), 100);
  e.debit(100);
  EXPECT_EQ(e.balance(), 0);
}

TEST(Redeem, FullCycleCreditsAccount) {
  World w;
  w.bank.open_account("alice", 1000);
  auto coin = blind_mint(w.bank, "alice", 500, w.rng);
  w.confirm(coin.instance);

  wallet::PaymentOffer offer{coin.instance.tx.coin, coin.secrets.dlp.x};
  RedeemRequest req = w.bank.redeem(offer, "alice", w.chain, 1);
  Nat sb = bs::sign(req.m_blinded, coin.secrets.keys.priv);
  coin::CoinInstance terminal = w.bank.complete_redeem(req.ticket, sb);
  EXPECT_EQ(terminal.tx.h_prev, coin::tx_hash(coin.instance.tx));

  EXPECT_EQ(code_of([&] { w.bank.settle_redeem(req.ticket, w.chain, 1); }), Errc::kState);
  w.confirm(terminal);
  Receipt rc = w.bank.settle_redeem(req.ticket, w.chain, 1);
  EXPECT_EQ(rc.val, 500u);
  EXPECT_EQ(rc.final_tx_hash, coin::tx_hash(terminal.tx));
  EXPECT_EQ(w.bank.account_balance("alice"), 1000);
  EXPECT_EQ(w.escrow.balance(), 0);
  EXPECT_TRUE(w.bank.is_redeemed(offer.coin));
  EXPECT_EQ(w.bank.redeemed_value(), 500u);

  EXPECT_EQ(code_of([&] { w.bank.redeem(offer, "alice", w.chain, 1); }), Errc::kDoubleRedeem);
}

TEST(Redeem, Rejections) {
  World w;
  w.bank.open_account("alice", 1000);
  auto coin = blind_mint(w.bank, "alice", 100, w.rng);
  wallet::PaymentOffer offer{coin.instance.tx.coin, coin.secrets.dlp.x};
  EXPECT_EQ(code_of([&] { w.bank.redeem(offer, "alice", w.chain, 1); }), Errc::kUnknownCoin);
  w.confirm(coin.instance);
  EXPECT_EQ(code_of([&] { w.bank.redeem(offer, "carol", w.chain, 1); }), Errc::kUnknownAccount);
  wallet::PaymentOffer wrong{offer.coin, offer.x + 1};
  EXPECT_EQ(code_of([&] { w.bank.redeem(wrong, "alice", w.chain, 1); }), Errc::kOwnership);
  EXPECT_EQ(w.escrow.balance(), 100);
}

TEST(Redeem, AbortLeavesCoinRedeemable) {
  World w;
  w.bank.open_account("alice", 1000);
  auto coin = blind_mint(w.bank, "alice", 100, w.rng);
  w.confirm(coin.instance);
  wallet::PaymentOffer offer{coin.instance.tx.coin, coin.secrets.dlp.x};
  RedeemRequest req = w.bank.redeem(offer, "alice", w.chain, 1);
  w.bank.abort_redeem(req.ticket);
  EXPECT_FALSE(w.bank.is_redeemed(offer.coin));
  EXPECT_NO_THROW(w.bank.redeem(offer, "alice", w.chain, 1));
}

// Escrow always equals the value of coins minted and not yet redeemed.
TEST(Property, EscrowConservation) {
  World w;
  w.bank.open_account("alice", 100000);
  std::vector<fixture::Owned> live;
  std::int64_t outstanding = 0;
  for (int step = 0; step < 40; ++step) {
    if (live.empty() || w.rng.below(std::uint64_t{3}) != 0) {
      std::uint64_t val = coin::kDenominations[w.rng.below(std::uint64_t{3})];
      live.push_back(blind_mint(w.bank, "alice", val, w.rng));
      w.confirm(live.back().instance);
      outstanding += static_cast<std::int64_t>(val);
    } else {
      auto coin = live.back();
      live.pop_back();
      wallet::PaymentOffer offer{coin.instance.tx.coin, coin.secrets.dlp.x};
      auto req = w.bank.redeem(offer, "alice", w.chain, 1);
      auto terminal =
          w.bank.complete_redeem(req.ticket, bs::sign(req.m_blinded, coin.secrets.keys.priv));
      w.confirm(terminal);
      w.bank.settle_redeem(req.ticket, w.chain, 1);
      outstanding -= static_cast<std::int64_t>(offer.coin.val);
    }
    ASSERT_EQ(w.escrow.balance(), outstanding) << "step " << step;
    ASSERT_EQ(w.bank.account_balance("alice") + w.escrow.balance(), 100000);
  }
}
