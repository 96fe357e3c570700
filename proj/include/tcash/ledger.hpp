#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tcash/blindsig.hpp"
#include "tcash/bytes.hpp"
#include "tcash/coinmodel.hpp"

namespace tcash::ledger {

/// prev_hash(32) merkle_root(32) timestamp(8) nonce(8) difficulty(4), big-endian.
inline constexpr std::size_t kHeaderSize = 84;

struct BlockHeader {
  Digest prev_hash{};
  Digest merkle_root{};
  std::uint64_t timestamp = 0;
  std::uint64_t nonce = 0;
  std::uint32_t difficulty = 0;

  bool operator==(const BlockHeader&) const = default;
};

Bytes serialize_header(const BlockHeader& h);
Digest header_hash(const BlockHeader& h);

struct Block {
  BlockHeader header;
  std::vector<coin::CoinInstance> instances;

  Digest hash() const { return header_hash(header); }
  bool operator==(const Block&) const = default;
};

/// Binary Merkle root over instance hashes. A level of odd size repeats its
/// last node, so a single leaf h gives H(h || h). Throws Errc::kDomain on an
/// empty list.
Digest merkle_root(std::span<const coin::CoinInstance> instances);
Digest merkle_root_of(std::span<const Digest> leaves);

/// Merkle root as stored in a header: all-zero for a block without instances.
Digest block_merkle_root(std::span<const coin::CoinInstance> instances);

/// At least `bits` leading zero bits.
bool meets_difficulty(const Digest& hash, std::uint32_t bits);

/// Fills merkle root and difficulty, then searches nonces upward from 0.
Block pow_seal(Block draft, std::uint32_t difficulty);

/// The fixed first block of every chain at the given difficulty.
Block genesis_block(std::uint32_t difficulty);

enum class Reject {
  kMalformed,
  kUnknownBank,
  kBadDenomination,
  kDuplicateGenesis,
  kUnknownCoin,
  kStaleParent,
  kBadDlp,
  kBadSignature,
  kMempoolConflict,
  kDuplicateBlock,
  kUnknownParent,
  kBadDifficulty,
  kBadPow,
  kBadMerkle,
};

std::string_view to_string(Reject r);

/// Latest confirmed state of one coin.
struct CoinRecord {
  coin::Transaction latest;
  Digest tx_hash{};
  std::uint64_t height = 0;  // block height holding `latest`
  std::uint64_t hops = 0;    // instances on chain so far, genesis included
};

using CoinIndex = std::map<coin::CoinId, CoinRecord>;
using DenominationKeys = std::map<std::uint64_t, bs::PublicKey>;
using BankDirectory = std::map<Digest, DenominationKeys>;

/// Full contextual validation of one instance against a coin index.
std::optional<Reject> validate_coin_instance(const coin::CoinInstance& c, const CoinIndex& state,
                                             const BankDirectory& banks);

/// Records `c` as the coin's latest transaction. Assumes it validated.
void apply_instance(CoinIndex& state, const coin::CoinInstance& c, std::uint64_t height);

struct AppendResult {
  bool accepted = false;
  std::optional<Reject> reject;
  std::optional<std::size_t> instance_index;  // failing instance, when relevant
  bool tip_changed = false;
};

/// Block tree with longest-chain selection. Ties at equal height go to the
/// lower tip hash. Each stored block keeps the coin index as of that block.
class Chain {
 public:
  explicit Chain(std::uint32_t difficulty, BankDirectory banks = {});

  void register_bank(const Digest& bank_id, DenominationKeys keys);
  const BankDirectory& banks() const { return banks_; }
  std::uint32_t difficulty() const { return difficulty_; }

  AppendResult append_block(const Block& block);

  bool contains(const Digest& block_hash) const { return nodes_.count(block_hash) != 0; }
  std::size_t block_count() const { return nodes_.size(); }

  const Digest& tip_hash() const { return tip_; }
  const Block& tip() const;
  std::uint64_t height() const;
  const CoinIndex& tip_state() const;

  /// Latest transaction of the coin among blocks buried at least `depth`
  /// deep on the best chain (depth 1 = anything in the best chain).
  std::optional<CoinRecord> lookup_latest(const coin::CoinId& id, unsigned depth = 1) const;

  /// How many blocks bury the transaction on the best chain (1 = in tip).
  std::optional<std::uint64_t> confirmations(const Digest& tx_hash) const;

  /// Best-chain transaction whose h_prev is `parent_tx_hash`, if any.
  std::optional<Digest> child_of(const Digest& parent_tx_hash) const;

  /// Genesis first.
  std::vector<const Block*> best_chain() const;

  /// Mempool-style check against the current tip state.
  std::optional<Reject> validate_against_tip(const coin::CoinInstance& c) const;

 private:
  struct Node {
    Block block;
    Digest parent{};
    std::uint64_t height = 0;
    CoinIndex state;
  };

  const Node& node(const Digest& hash) const;
  const Node& ancestor_at(std::uint64_t height) const;
  void reindex_best_chain();

  std::uint32_t difficulty_;
  BankDirectory banks_;
  std::map<Digest, Node> nodes_;
  Digest tip_{};
  std::map<Digest, std::uint64_t> best_tx_heights_;
  std::map<Digest, Digest> best_children_;
};

/// Ledger file: for each block, the 84-byte header, a 4-byte instance count
/// and the concatenated 1088-byte instances.
Bytes serialize_blocks(std::span<const Block> blocks);
Bytes serialize_blocks(std::span<const Block* const> blocks);

/// Throws Errc::kFormat on empty or truncated input.
std::vector<Block> deserialize_blocks(ByteView bytes);

}  // namespace tcash::ledger
