#pragma once

#include <optional>

#include "tcash/blindsig.hpp"
#include "tcash/coinmodel.hpp"
#include "tcash/ledger.hpp"
#include "tcash/numtheory.hpp"
#include "tcash/profile.hpp"
#include "tcash/rng.hpp"

/// Payee half of a coin transfer, shared by wallets and by banks when they
/// take a coin back for redemption.
namespace tcash::wallet {

/// First message of a transfer: the coin index and the revealed DLP secret.
struct PaymentOffer {
  coin::CoinId coin;
  Nat x;
};

/// Secrets a new owner keeps: the DLP secret and the transfer private key.
struct OwnerSecrets {
  nt::DlpInstance dlp;
  bs::KeyPair keys;
};

/// Fresh DLP group and instance plus a transfer keypair for one coin hop.
OwnerSecrets make_owner_secrets(const Profile& profile, Rng& rng);

/// State the payee holds between sending m' and receiving s'.
struct PendingReceipt {
  coin::Transaction draft;
  bs::PublicKey payer_pk;
  std::optional<bs::BlindingFactor> blinding;
  Nat m_blinded;
  OwnerSecrets secrets;
};

/// Looks the coin up on `view`, checks the revealed secret, builds the next
/// transaction and blinds its hash under the payer's on-chain transfer key.
/// Throws Errc::kUnknownCoin or Errc::kOwnership.
PendingReceipt prepare_receipt(const PaymentOffer& offer, const ledger::Chain& view,
                               unsigned depth, const Profile& profile, Rng& rng);

/// Variant taking the already-generated next-owner secrets.
PendingReceipt prepare_receipt(const PaymentOffer& offer, const coin::Transaction& latest,
                               OwnerSecrets secrets, Rng& rng);

/// Unblinds the payer's answer. Throws Errc::kProtocol if the signature does
/// not verify under the payer's transfer key.
coin::CoinInstance complete_receipt(const PendingReceipt& pending, const Nat& s_blinded);

}  // namespace tcash::wallet
