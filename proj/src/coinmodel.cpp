#include "tcash/coinmodel.hpp"

#include <algorithm>

#include "tcash/errors.hpp"

namespace tcash::coin {

namespace {

bool fits(const Nat& v, std::size_t width) { return sgn(v) >= 0 && byte_length(v) <= width; }

void append_digest(Bytes& out, const Digest& d) { out.insert(out.end(), d.begin(), d.end()); }

}  // namespace

bool is_denomination(std::uint64_t val) {
  return std::find(std::begin(kDenominations), std::end(kDenominations), val) !=
         std::end(kDenominations);
}

void append_tx(Bytes& out, const Transaction& tx) {
  append_digest(out, tx.coin.sn);
  out.insert(out.end(), kValWidth - 8, 0);
  put_u64(out, tx.coin.val);
  append_digest(out, tx.coin.bank);
  put_nat(out, tx.dlp.p, kDlpWidth);
  put_nat(out, tx.dlp.alpha, kDlpWidth);
  put_nat(out, tx.dlp.beta, kDlpWidth);
  put_nat(out, tx.transfer_pk.n, kModulusWidth);
  put_nat(out, tx.transfer_pk.e, kExponentWidth);
  put_nat(out, tx.x_prev, kSecretWidth);
  append_digest(out, tx.h_prev);
}

Bytes serialize_tx(const Transaction& tx) {
  Bytes out;
  out.reserve(kTxSize);
  append_tx(out, tx);
  return out;
}

namespace {

Transaction read_tx(ByteReader& in) {
  Transaction tx;
  tx.coin.sn = in.digest();
  ByteView val_slot = in.take(kValWidth);
  if (std::any_of(val_slot.begin(), val_slot.end() - 8, [](std::uint8_t b) { return b != 0; })) {
    throw Error(Errc::kFormat, "val slot exceeds 64 bits");
  }
  tx.coin.val = get_u64(val_slot.last(8));
  tx.coin.bank = in.digest();
  tx.dlp.p = in.nat(kDlpWidth);
  tx.dlp.alpha = in.nat(kDlpWidth);
  tx.dlp.beta = in.nat(kDlpWidth);
  tx.transfer_pk.n = in.nat(kModulusWidth);
  tx.transfer_pk.e = in.nat(kExponentWidth);
  tx.x_prev = in.nat(kSecretWidth);
  tx.h_prev = in.digest();
  return tx;
}

}  // namespace

Transaction deserialize_tx(ByteView bytes) {
  if (bytes.size() != kTxSize) {
    throw Error(Errc::kFormat, "transaction encoding must be " + std::to_string(kTxSize) +
                                   " bytes, got " + std::to_string(bytes.size()));
  }
  ByteReader in(bytes);
  return read_tx(in);
}

Digest tx_hash(const Transaction& tx) { return sha256(serialize_tx(tx)); }

void append_instance(Bytes& out, const CoinInstance& c) {
  append_tx(out, c.tx);
  put_nat(out, c.sig, kSignatureWidth);
}

Bytes serialize_instance(const CoinInstance& c) {
  Bytes out;
  out.reserve(kInstanceSize);
  append_instance(out, c);
  return out;
}

CoinInstance deserialize_instance(ByteView bytes) {
  if (bytes.size() != kInstanceSize) {
    throw Error(Errc::kFormat, "coin instance encoding must be " +
                                   std::to_string(kInstanceSize) + " bytes, got " +
                                   std::to_string(bytes.size()));
  }
  ByteReader in(bytes);
  CoinInstance c;
  c.tx = read_tx(in);
  c.sig = in.nat(kSignatureWidth);
  return c;
}

Digest instance_hash(const CoinInstance& c) { return sha256(serialize_instance(c)); }

Transaction make_genesis_tx(const CoinId& coin, const nt::DlpPublic& dlp,
                            const bs::PublicKey& transfer_pk) {
  if (is_zero(coin.sn)) throw Error(Errc::kDomain, "serial number must be non-zero");
  if (!is_denomination(coin.val)) {
    throw Error(Errc::kUnknownDenomination, std::to_string(coin.val));
  }
  return Transaction{coin, dlp, transfer_pk, Nat(0), Digest{}};
}

Transaction make_transfer_tx(const Transaction& prev, const Nat& revealed_x,
                             const nt::DlpPublic& new_dlp, const bs::PublicKey& new_pk) {
  if (!nt::verify_dlp(prev.dlp, revealed_x)) {
    throw Error(Errc::kOwnership, "revealed secret does not solve the previous DLP");
  }
  return Transaction{prev.coin, new_dlp, new_pk, revealed_x, tx_hash(prev)};
}

bool validate_syntactic(const CoinInstance& c) {
  const Transaction& tx = c.tx;
  if (is_zero(tx.coin.sn)) return false;
  if (!is_denomination(tx.coin.val)) return false;

  const bool x_null = tx.x_prev == 0;
  const bool h_null = is_zero(tx.h_prev);
  if (x_null != h_null) return false;

  if (!fits(tx.dlp.p, kDlpWidth) || !fits(tx.dlp.alpha, kDlpWidth) ||
      !fits(tx.dlp.beta, kDlpWidth)) {
    return false;
  }
  if (tx.dlp.p < 3 || tx.dlp.alpha >= tx.dlp.p || tx.dlp.beta >= tx.dlp.p) return false;
  if (tx.dlp.alpha < 2 || tx.dlp.beta < 1) return false;

  if (!fits(tx.transfer_pk.n, kModulusWidth) || !fits(tx.transfer_pk.e, kExponentWidth)) {
    return false;
  }
  if (tx.transfer_pk.n < 3 || tx.transfer_pk.e < 3 || mpz_even_p(tx.transfer_pk.e.get_mpz_t())) {
    return false;
  }
  if (!fits(tx.x_prev, kSecretWidth)) return false;
  return fits(c.sig, kSignatureWidth);
}

}  // namespace tcash::coin
