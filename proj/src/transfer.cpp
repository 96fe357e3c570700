#include "tcash/transfer.hpp"

#include "tcash/errors.hpp"

namespace tcash::wallet {

OwnerSecrets make_owner_secrets(const Profile& profile, Rng& rng) {
  nt::DlpGroup group =
      nt::gen_dlp_group(profile.dlp_p_bits, profile.dlp_q_bits, rng.next(), profile.mr_rounds);
  nt::DlpInstance dlp = nt::gen_dlp_instance(group, rng.next());
  bs::KeyPair keys = bs::keygen(profile.rsa_bits, rng.next(), profile.rsa_e, profile.mr_rounds);
  return OwnerSecrets{std::move(dlp), std::move(keys)};
}

PendingReceipt prepare_receipt(const PaymentOffer& offer, const coin::Transaction& latest,
                               OwnerSecrets secrets, Rng& rng) {
  if (latest.coin != offer.coin) throw Error(Errc::kUnknownCoin, "offer names another coin");
  if (!nt::verify_dlp(latest.dlp, offer.x)) {
    throw Error(Errc::kOwnership, "revealed secret does not solve the coin's DLP");
  }
  PendingReceipt out;
  out.draft = coin::make_transfer_tx(latest, offer.x, secrets.dlp.public_part(), secrets.keys.pub);
  out.payer_pk = latest.transfer_pk;
  Nat m = bs::digest_to_message(coin::tx_hash(out.draft), out.payer_pk.n);
  out.blinding = bs::BlindingFactor::random(out.payer_pk.n, rng);
  out.m_blinded = bs::blind(m, *out.blinding, out.payer_pk);
  out.secrets = std::move(secrets);
  return out;
}

PendingReceipt prepare_receipt(const PaymentOffer& offer, const ledger::Chain& view,
                               unsigned depth, const Profile& profile, Rng& rng) {
  auto latest = view.lookup_latest(offer.coin, depth);
  if (!latest) throw Error(Errc::kUnknownCoin, "coin not found on chain");
  if (!nt::verify_dlp(latest->latest.dlp, offer.x)) {
    throw Error(Errc::kOwnership, "revealed secret does not solve the coin's DLP");
  }
  return prepare_receipt(offer, latest->latest, make_owner_secrets(profile, rng), rng);
}

coin::CoinInstance complete_receipt(const PendingReceipt& pending, const Nat& s_blinded) {
  if (!pending.blinding) throw Error(Errc::kState, "receipt was never blinded");
  if (sgn(s_blinded) < 0 || s_blinded >= pending.payer_pk.n) {
    throw Error(Errc::kProtocol, "blind signature outside the payer's modulus");
  }
  Nat s = bs::unblind(s_blinded, *pending.blinding, pending.payer_pk.n);
  Nat m = bs::digest_to_message(coin::tx_hash(pending.draft), pending.payer_pk.n);
  if (!bs::verify(s, m, pending.payer_pk)) {
    throw Error(Errc::kProtocol, "unblinded signature does not verify under payer key");
  }
  return coin::CoinInstance{pending.draft, std::move(s)};
}

}  // namespace tcash::wallet
