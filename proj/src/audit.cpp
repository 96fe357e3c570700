#include "tcash/audit.hpp"

#include <map>
#include <sstream>

#include "tcash/blindsig.hpp"
#include "tcash/errors.hpp"
#include "tcash/ledger.hpp"
#include "tcash/numtheory.hpp"

namespace tcash::audit {

namespace {

// The walker keeps its own coin table and recomputes every hash from the raw
// bytes; nothing is borrowed from ledger::Chain.
struct Latest {
  coin::Transaction tx;
  Digest tx_hash{};
  std::size_t custody_index = 0;
};

struct Fail {
  std::optional<std::size_t> instance;
  std::string rule;
};

bool leading_zero_bits(const Digest& h, std::uint32_t bits) {
  for (std::uint32_t i = 0; i < bits; ++i) {
    if ((h[i / 8] >> (7 - i % 8)) & 1) return false;
  }
  return true;
}

Digest merkle(std::vector<Digest> level) {
  while (true) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Digest> up;
    for (std::size_t i = 0; i < level.size(); i += 2) up.push_back(sha256_pair(level[i], level[i + 1]));
    if (up.size() == 1) return up[0];
    level = std::move(up);
  }
}

bool signature_holds(const Nat& sig, const Digest& tx_hash, const bs::PublicKey& pk) {
  if (pk.n <= 2 || sig >= pk.n) return false;
  Nat m;
  try {
    m = bs::digest_to_message(tx_hash, pk.n);
  } catch (const Error&) {
    return false;
  }
  return nt::mod_exp(sig, pk.e, pk.n) == m;
}

class Walker {
 public:
  Walker(const ledger::ChainParams& params, AuditReport& report)
      : params_(params), report_(report) {}

  std::optional<Fail> block(std::size_t index, ByteReader& in);

 private:
  std::optional<Fail> instance(std::size_t block, std::size_t index, const coin::CoinInstance& c);

  const ledger::ChainParams& params_;
  AuditReport& report_;
  std::map<coin::CoinId, Latest> coins_;
  Digest prev_{};
};

std::optional<Fail> Walker::block(std::size_t index, ByteReader& in) {
  if (in.remaining() < ledger::kHeaderSize + 4) return Fail{std::nullopt, "format"};
  ByteView raw_header = in.take(ledger::kHeaderSize);
  ByteReader h(raw_header);
  const Digest prev = h.digest();
  const Digest root = h.digest();
  h.u64();  // timestamp
  h.u64();  // nonce
  const std::uint32_t difficulty = h.u32();
  const std::uint32_t count = in.u32();
  const Digest hash = sha256(raw_header);

  if (in.remaining() / coin::kInstanceSize < count) return Fail{std::nullopt, "format"};
  std::vector<coin::CoinInstance> instances;
  std::vector<Digest> leaves;
  for (std::uint32_t i = 0; i < count; ++i) {
    ByteView raw = in.take(coin::kInstanceSize);
    leaves.push_back(sha256(raw));
    try {
      instances.push_back(coin::deserialize_instance(raw));
    } catch (const Error&) {
      return Fail{i, "malformed"};
    }
  }

  if (index == 0) {
    const ledger::Block expected = ledger::genesis_block(params_.difficulty);
    if (count != 0 || Bytes(raw_header.begin(), raw_header.end()) !=
                          ledger::serialize_header(expected.header)) {
      return Fail{std::nullopt, "genesis"};
    }
  } else {
    if (prev != prev_) return Fail{std::nullopt, "linkage"};
    if (difficulty != params_.difficulty) return Fail{std::nullopt, "difficulty"};
    if (!leading_zero_bits(hash, difficulty)) return Fail{std::nullopt, "pow"};
    const Digest want = leaves.empty() ? Digest{} : merkle(leaves);
    if (root != want) return Fail{std::nullopt, "merkle"};
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (auto f = instance(index, i, instances[i])) return f;
    }
  }
  prev_ = hash;
  report_.instances += count;
  return std::nullopt;
}

std::optional<Fail> Walker::instance(std::size_t block, std::size_t index,
                                     const coin::CoinInstance& c) {
  if (!coin::validate_syntactic(c)) return Fail{index, "syntax"};
  const coin::Transaction& tx = c.tx;
  const Digest hash = coin::tx_hash(tx);
  Hop hop{block, index, hash, tx.is_genesis(), true, true, false};

  auto it = coins_.find(tx.coin);
  if (tx.is_genesis()) {
    if (it != coins_.end()) return Fail{index, "duplicate-genesis"};
    auto bank = params_.banks.find(tx.coin.bank);
    if (bank == params_.banks.end()) return Fail{index, "unknown-bank"};
    auto key = bank->second.find(tx.coin.val);
    if (key == bank->second.end()) return Fail{index, "unknown-denomination"};
    hop.sig_ok = signature_holds(c.sig, hash, key->second);
    if (!hop.sig_ok) return Fail{index, "signature"};
    report_.coins.push_back(Custody{tx.coin, {hop}});
    coins_.emplace(tx.coin, Latest{tx, hash, report_.coins.size() - 1});
    return std::nullopt;
  }

  if (it == coins_.end()) return Fail{index, "unknown-coin"};
  Latest& latest = it->second;
  hop.linkage_ok = tx.h_prev == latest.tx_hash;
  if (!hop.linkage_ok) return Fail{index, "parent-hash"};
  const nt::DlpPublic& d = latest.tx.dlp;
  hop.dlp_ok = tx.x_prev >= 1 && tx.x_prev < d.p && nt::mod_exp(d.alpha, tx.x_prev, d.p) == d.beta;
  if (!hop.dlp_ok) return Fail{index, "dlp-reveal"};
  hop.sig_ok = signature_holds(c.sig, hash, latest.tx.transfer_pk);
  if (!hop.sig_ok) return Fail{index, "signature"};
  report_.coins[latest.custody_index].hops.push_back(hop);
  latest.tx = tx;
  latest.tx_hash = hash;
  return std::nullopt;
}

std::string hop_line(const Hop& h, std::size_t n) {
  std::ostringstream out;
  out << "  hop " << n << " block " << h.block << " instance " << h.instance << " tx "
      << to_hex(h.tx_hash);
  if (h.genesis) {
    out << " genesis";
  } else {
    out << " link " << (h.linkage_ok ? "ok" : "bad") << " dlp " << (h.dlp_ok ? "ok" : "bad");
  }
  out << " sig " << (h.sig_ok ? "ok" : "bad");
  return out.str();
}

}  // namespace

const Custody* AuditReport::find(const coin::CoinId& id) const {
  for (const Custody& c : coins) {
    if (c.coin == id) return &c;
  }
  return nullptr;
}

AuditReport audit_ledger(ByteView ledger_bytes, const ledger::ChainParams& params) {
  AuditReport report;
  if (ledger_bytes.empty()) {
    report.violation = Violation{0, std::nullopt, "format"};
    return report;
  }
  ByteReader in(ledger_bytes);
  Walker walker(params, report);
  for (std::size_t index = 0; !in.done(); ++index) {
    if (auto fail = walker.block(index, in)) {
      report.violation = Violation{index, fail->instance, fail->rule};
      return report;
    }
    report.blocks = index + 1;
  }
  return report;
}

std::string format_custody(const Custody& c) {
  std::ostringstream out;
  out << "coin sn " << to_hex(c.coin.sn) << " val " << c.coin.val << " bank "
      << to_hex(c.coin.bank) << " hops " << c.hops.size() << "\n";
  for (std::size_t i = 0; i < c.hops.size(); ++i) out << hop_line(c.hops[i], i) << "\n";
  return out.str();
}

std::string format_report(const AuditReport& r) {
  std::ostringstream out;
  out << "tcash-audit 1\n";
  out << "blocks " << r.blocks << " instances " << r.instances << " coins " << r.coins.size()
      << "\n";
  for (const Custody& c : r.coins) out << format_custody(c);
  if (r.violation) {
    out << "violation block " << r.violation->block << " instance "
        << (r.violation->instance ? std::to_string(*r.violation->instance) : "-") << " rule "
        << r.violation->rule << "\n";
  } else {
    out << "result valid\n";
  }
  return out.str();
}

}  // namespace tcash::audit
