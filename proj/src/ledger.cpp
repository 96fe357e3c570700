#include "tcash/ledger.hpp"

#include <algorithm>

#include "tcash/errors.hpp"
#include "tcash/numtheory.hpp"

namespace tcash::ledger {

Bytes serialize_header(const BlockHeader& h) {
  Bytes out;
  out.reserve(kHeaderSize);
  out.insert(out.end(), h.prev_hash.begin(), h.prev_hash.end());
  out.insert(out.end(), h.merkle_root.begin(), h.merkle_root.end());
  put_u64(out, h.timestamp);
  put_u64(out, h.nonce);
  put_u32(out, h.difficulty);
  return out;
}

Digest header_hash(const BlockHeader& h) { return sha256(serialize_header(h)); }

Digest merkle_root_of(std::span<const Digest> leaves) {
  if (leaves.empty()) throw Error(Errc::kDomain, "merkle root of an empty list");
  std::vector<Digest> level(leaves.begin(), leaves.end());
  do {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Digest> next;
    next.reserve(level.size() / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) {
      next.push_back(sha256_pair(level[i], level[i + 1]));
    }
    level = std::move(next);
  } while (level.size() > 1);
  return level.front();
}

Digest merkle_root(std::span<const coin::CoinInstance> instances) {
  std::vector<Digest> leaves;
  leaves.reserve(instances.size());
  for (const auto& c : instances) leaves.push_back(coin::instance_hash(c));
  return merkle_root_of(leaves);
}

Digest block_merkle_root(std::span<const coin::CoinInstance> instances) {
  return instances.empty() ? Digest{} : merkle_root(instances);
}

bool meets_difficulty(const Digest& hash, std::uint32_t bits) {
  if (bits > 256) return false;
  std::uint32_t full = bits / 8;
  for (std::uint32_t i = 0; i < full; ++i) {
    if (hash[i] != 0) return false;
  }
  std::uint32_t rest = bits % 8;
  if (rest == 0) return true;
  return (hash[full] >> (8 - rest)) == 0;
}

Block pow_seal(Block draft, std::uint32_t difficulty) {
  if (difficulty > 64) throw Error(Errc::kDomain, "difficulty outside desk-scale bounds");
  draft.header.difficulty = difficulty;
  draft.header.merkle_root = block_merkle_root(draft.instances);
  draft.header.nonce = 0;
  // The header is re-serialized once; only the nonce bytes move.
  Bytes raw = serialize_header(draft.header);
  constexpr std::size_t kNonceOffset = 32 + 32 + 8;
  for (std::uint64_t nonce = 0;; ++nonce) {
    for (std::size_t i = 0; i < 8; ++i) {
      raw[kNonceOffset + i] = static_cast<std::uint8_t>(nonce >> (56 - 8 * i));
    }
    if (meets_difficulty(sha256(raw), difficulty)) {
      draft.header.nonce = nonce;
      return draft;
    }
  }
}

Block genesis_block(std::uint32_t difficulty) { return pow_seal(Block{}, difficulty); }

std::string_view to_string(Reject r) {
  switch (r) {
    case Reject::kMalformed: return "malformed";
    case Reject::kUnknownBank: return "unknown-bank";
    case Reject::kBadDenomination: return "bad-denomination";
    case Reject::kDuplicateGenesis: return "duplicate-genesis";
    case Reject::kUnknownCoin: return "unknown-coin";
    case Reject::kStaleParent: return "stale-parent";
    case Reject::kBadDlp: return "bad-dlp";
    case Reject::kBadSignature: return "bad-signature";
    case Reject::kMempoolConflict: return "mempool-conflict";
    case Reject::kDuplicateBlock: return "duplicate-block";
    case Reject::kUnknownParent: return "unknown-parent";
    case Reject::kBadDifficulty: return "bad-difficulty";
    case Reject::kBadPow: return "bad-pow";
    case Reject::kBadMerkle: return "bad-merkle";
  }
  return "unknown";
}

namespace {

bool signature_valid(const coin::CoinInstance& c, const bs::PublicKey& pk) {
  try {
    Nat m = bs::digest_to_message(coin::tx_hash(c.tx), pk.n);
    return bs::verify(c.sig, m, pk);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::optional<Reject> validate_coin_instance(const coin::CoinInstance& c, const CoinIndex& state,
                                             const BankDirectory& banks) {
  if (!coin::validate_syntactic(c)) return Reject::kMalformed;
  const coin::Transaction& tx = c.tx;

  if (tx.is_genesis()) {
    auto bank = banks.find(tx.coin.bank);
    if (bank == banks.end()) return Reject::kUnknownBank;
    auto key = bank->second.find(tx.coin.val);
    if (key == bank->second.end()) return Reject::kBadDenomination;
    if (state.count(tx.coin) != 0) return Reject::kDuplicateGenesis;
    if (!signature_valid(c, key->second)) return Reject::kBadSignature;
    return std::nullopt;
  }

  auto it = state.find(tx.coin);
  if (it == state.end()) return Reject::kUnknownCoin;
  const CoinRecord& prev = it->second;
  if (tx.h_prev != prev.tx_hash) return Reject::kStaleParent;
  if (!nt::verify_dlp(prev.latest.dlp, tx.x_prev)) return Reject::kBadDlp;
  if (!signature_valid(c, prev.latest.transfer_pk)) return Reject::kBadSignature;
  return std::nullopt;
}

void apply_instance(CoinIndex& state, const coin::CoinInstance& c, std::uint64_t height) {
  CoinRecord& rec = state[c.tx.coin];
  rec.latest = c.tx;
  rec.tx_hash = coin::tx_hash(c.tx);
  rec.height = height;
  rec.hops += 1;
}

Chain::Chain(std::uint32_t difficulty, BankDirectory banks)
    : difficulty_(difficulty), banks_(std::move(banks)) {
  Block genesis = genesis_block(difficulty);
  tip_ = genesis.hash();
  nodes_.emplace(tip_, Node{std::move(genesis), Digest{}, 0, {}});
}

void Chain::register_bank(const Digest& bank_id, DenominationKeys keys) {
  banks_[bank_id] = std::move(keys);
}

const Chain::Node& Chain::node(const Digest& hash) const { return nodes_.at(hash); }

const Block& Chain::tip() const { return node(tip_).block; }

std::uint64_t Chain::height() const { return node(tip_).height; }

const CoinIndex& Chain::tip_state() const { return node(tip_).state; }

const Chain::Node& Chain::ancestor_at(std::uint64_t height) const {
  const Node* n = &node(tip_);
  while (n->height > height) n = &node(n->parent);
  return *n;
}

AppendResult Chain::append_block(const Block& block) {
  AppendResult result;
  const Digest hash = block.hash();
  if (contains(hash)) {
    result.reject = Reject::kDuplicateBlock;
    return result;
  }
  auto parent = nodes_.find(block.header.prev_hash);
  if (parent == nodes_.end()) {
    result.reject = Reject::kUnknownParent;
    return result;
  }
  if (block.header.difficulty != difficulty_) {
    result.reject = Reject::kBadDifficulty;
    return result;
  }
  if (!meets_difficulty(hash, block.header.difficulty)) {
    result.reject = Reject::kBadPow;
    return result;
  }
  if (block.header.merkle_root != block_merkle_root(block.instances)) {
    result.reject = Reject::kBadMerkle;
    return result;
  }

  // Instances apply in order, so two children of one parent inside a
  // single block are caught as a stale parent.
  const std::uint64_t height = parent->second.height + 1;
  CoinIndex state = parent->second.state;
  for (std::size_t i = 0; i < block.instances.size(); ++i) {
    if (auto why = validate_coin_instance(block.instances[i], state, banks_)) {
      result.reject = why;
      result.instance_index = i;
      return result;
    }
    apply_instance(state, block.instances[i], height);
  }

  nodes_.emplace(hash, Node{block, block.header.prev_hash, height, std::move(state)});
  result.accepted = true;

  const std::uint64_t tip_height = node(tip_).height;
  if (height > tip_height || (height == tip_height && hash < tip_)) {
    tip_ = hash;
    result.tip_changed = true;
    reindex_best_chain();
  }
  return result;
}

void Chain::reindex_best_chain() {
  best_tx_heights_.clear();
  best_children_.clear();
  for (const Node* n = &node(tip_);; n = &node(n->parent)) {
    for (const auto& c : n->block.instances) {
      Digest h = coin::tx_hash(c.tx);
      best_tx_heights_[h] = n->height;
      if (!c.tx.is_genesis()) best_children_[c.tx.h_prev] = h;
    }
    if (n->height == 0) break;
  }
}

std::optional<CoinRecord> Chain::lookup_latest(const coin::CoinId& id, unsigned depth) const {
  const std::uint64_t tip_height = height();
  const std::uint64_t buried = depth <= 1 ? 0 : depth - 1;
  if (buried > tip_height) return std::nullopt;
  const CoinIndex& state = ancestor_at(tip_height - buried).state;
  auto it = state.find(id);
  if (it == state.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint64_t> Chain::confirmations(const Digest& tx_hash) const {
  auto it = best_tx_heights_.find(tx_hash);
  if (it == best_tx_heights_.end()) return std::nullopt;
  return height() - it->second + 1;
}

std::optional<Digest> Chain::child_of(const Digest& parent_tx_hash) const {
  auto it = best_children_.find(parent_tx_hash);
  if (it == best_children_.end()) return std::nullopt;
  return it->second;
}

std::vector<const Block*> Chain::best_chain() const {
  std::vector<const Block*> out;
  for (const Node* n = &node(tip_);; n = &node(n->parent)) {
    out.push_back(&n->block);
    if (n->height == 0) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::optional<Reject> Chain::validate_against_tip(const coin::CoinInstance& c) const {
  return validate_coin_instance(c, tip_state(), banks_);
}

namespace {

void append_block(Bytes& out, const Block& b) {
  Bytes header = serialize_header(b.header);
  out.insert(out.end(), header.begin(), header.end());
  put_u32(out, static_cast<std::uint32_t>(b.instances.size()));
  for (const auto& c : b.instances) coin::append_instance(out, c);
}

}  // namespace

Bytes serialize_blocks(std::span<const Block> blocks) {
  Bytes out;
  for (const auto& b : blocks) append_block(out, b);
  return out;
}

Bytes serialize_blocks(std::span<const Block* const> blocks) {
  Bytes out;
  for (const Block* b : blocks) append_block(out, *b);
  return out;
}

std::vector<Block> deserialize_blocks(ByteView bytes) {
  if (bytes.empty()) throw Error(Errc::kFormat, "empty ledger");
  ByteReader in(bytes);
  std::vector<Block> blocks;
  while (!in.done()) {
    Block b;
    b.header.prev_hash = in.digest();
    b.header.merkle_root = in.digest();
    b.header.timestamp = in.u64();
    b.header.nonce = in.u64();
    b.header.difficulty = in.u32();
    std::uint32_t count = in.u32();
    if (static_cast<std::uint64_t>(count) * coin::kInstanceSize > in.remaining()) {
      throw Error(Errc::kFormat, "block " + std::to_string(blocks.size()) + " claims " +
                                     std::to_string(count) + " instances past end of file");
    }
    b.instances.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      b.instances.push_back(coin::deserialize_instance(in.take(coin::kInstanceSize)));
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

}  // namespace tcash::ledger
