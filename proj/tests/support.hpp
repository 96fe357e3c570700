#pragma once

// Small fixtures shared by the unit tests: a toy bank with denomination keys
// and helpers that mint and hand over coins without going through a network.

#include <cstdint>
#include <string>

#include "tcash/bank.hpp"
#include "tcash/coinmodel.hpp"
#include "tcash/ledger.hpp"
#include "tcash/profile.hpp"
#include "tcash/rng.hpp"
#include "tcash/transfer.hpp"

namespace tcash::fixture {

struct Owned {
  coin::CoinInstance instance;
  wallet::OwnerSecrets secrets;
};

inline Digest test_bank_id() { return bank::Bank::id_for("acme"); }

inline const bs::KeyPair& denomination_key(std::uint64_t val) {
  static const bs::KeyPair k100 = bs::keygen(kToyProfile.rsa_bits, 100, kToyProfile.rsa_e);
  static const bs::KeyPair k500 = bs::keygen(kToyProfile.rsa_bits, 500, kToyProfile.rsa_e);
  static const bs::KeyPair k1000 = bs::keygen(kToyProfile.rsa_bits, 1000, kToyProfile.rsa_e);
  return val == 100 ? k100 : val == 500 ? k500 : k1000;
}

inline ledger::BankDirectory test_banks() {
  ledger::DenominationKeys keys;
  for (std::uint64_t v : coin::kDenominations) keys[v] = denomination_key(v).pub;
  return {{test_bank_id(), keys}};
}

inline Nat sign_tx(const coin::Transaction& tx, const bs::PrivateKey& sk) {
  return bs::sign(bs::digest_to_message(coin::tx_hash(tx), sk.n), sk);
}

/// Genesis instance signed directly (no blinding) under the denomination key.
inline Owned mint_direct(Rng& rng, std::uint64_t val = 100) {
  Owned o{{}, wallet::make_owner_secrets(kToyProfile, rng)};
  coin::CoinId id{rng.digest(), val, test_bank_id()};
  o.instance.tx = coin::make_genesis_tx(id, o.secrets.dlp.public_part(), o.secrets.keys.pub);
  o.instance.sig = sign_tx(o.instance.tx, denomination_key(val).priv);
  return o;
}

/// Next hop, signed by the current owner.
inline Owned transfer_direct(const Owned& from, Rng& rng) {
  Owned o{{}, wallet::make_owner_secrets(kToyProfile, rng)};
  o.instance.tx = coin::make_transfer_tx(from.instance.tx, from.secrets.dlp.x,
                                         o.secrets.dlp.public_part(), o.secrets.keys.pub);
  o.instance.sig = sign_tx(o.instance.tx, from.secrets.keys.priv);
  return o;
}

inline ledger::Block seal_on(const ledger::Block& parent, std::vector<coin::CoinInstance> inst,
                             std::uint32_t difficulty, std::uint64_t timestamp = 1) {
  ledger::Block b;
  b.header.prev_hash = parent.hash();
  b.header.timestamp = timestamp;
  b.instances = std::move(inst);
  return ledger::pow_seal(std::move(b), difficulty);
}

}  // namespace tcash::fixture
