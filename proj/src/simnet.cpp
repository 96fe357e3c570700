#include "tcash/simnet.hpp"

#include <algorithm>

#include "tcash/errors.hpp"

namespace tcash::sim {

struct Simulation::Node {
  explicit Node(std::uint32_t difficulty) : chain(difficulty) {}

  ledger::Chain chain;
  std::vector<coin::CoinInstance> mempool;
  std::set<Digest> seen_instances;
  std::set<Digest> seen_blocks;
  std::vector<std::size_t> peers;
  std::map<Digest, std::vector<ledger::Block>> orphans;  // keyed by missing parent
  bool miner = false;

  // Mining state: the draft being searched and where the search stands.
  std::uint64_t mempool_version = 0;
  std::optional<ledger::Block> draft;
  std::uint64_t draft_version = 0;
  Bytes draft_header;
  std::uint64_t next_nonce = 0;

  bool in_mempool(const coin::CoinId& id) const {
    return std::any_of(mempool.begin(), mempool.end(),
                       [&](const coin::CoinInstance& c) { return c.tx.coin == id; });
  }
};

class Simulation::Endpoint final : public wallet::Network {
 public:
  Endpoint(Simulation& sim, std::size_t node) : sim_(sim), node_(node) {}

  void broadcast(const coin::CoinInstance& c) override { sim_.broadcast(node_, c); }
  wallet::WaitOutcome await_confirmation(const coin::CoinId&, const Digest& tx_hash,
                                         const Digest& parent_hash) override {
    return sim_.await_confirmation(node_, tx_hash, parent_hash);
  }
  const ledger::Chain& view() const override { return sim_.chain(node_); }
  unsigned confirm_depth() const override { return sim_.config().confirm_depth; }

 private:
  Simulation& sim_;
  std::size_t node_;
};

void validate_config(const SimConfig& cfg) {
  if (cfg.nodes == 0) throw Error(Errc::kDomain, "need at least one node");
  for (std::size_t m : cfg.miners) {
    if (m >= cfg.nodes) throw Error(Errc::kDomain, "miner index out of range");
  }
  for (const auto& [a, b] : cfg.links) {
    if (a >= cfg.nodes || b >= cfg.nodes || a == b) throw Error(Errc::kDomain, "bad link");
  }
  if (cfg.delay.min_ticks > cfg.delay.max_ticks) throw Error(Errc::kDomain, "bad delay range");
  if (cfg.confirm_depth == 0) throw Error(Errc::kDomain, "confirmation depth must be >= 1");
  if (cfg.hashes_per_tick == 0) throw Error(Errc::kDomain, "hash budget must be positive");
  if (cfg.difficulty > 32) throw Error(Errc::kDomain, "difficulty outside desk-scale bounds");
  if (cfg.profile == nullptr) throw Error(Errc::kProfile, "no profile");
}

Simulation::Simulation(SimConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed, "network") {
  validate_config(cfg_);
  for (std::size_t i = 0; i < cfg_.nodes; ++i) {
    nodes_.push_back(std::make_unique<Node>(cfg_.difficulty));
    endpoints_.push_back(std::make_unique<Endpoint>(*this, i));
  }
  if (cfg_.links.empty()) {
    for (std::size_t i = 0; i < cfg_.nodes; ++i) {
      for (std::size_t j = 0; j < cfg_.nodes; ++j) {
        if (i != j) nodes_[i]->peers.push_back(j);
      }
    }
  } else {
    for (const auto& [a, b] : cfg_.links) {
      nodes_[a]->peers.push_back(b);
      nodes_[b]->peers.push_back(a);
    }
    for (auto& n : nodes_) {
      std::sort(n->peers.begin(), n->peers.end());
      n->peers.erase(std::unique(n->peers.begin(), n->peers.end()), n->peers.end());
    }
  }
  if (cfg_.miners.empty()) {
    for (auto& n : nodes_) n->miner = true;
  } else {
    for (std::size_t m : cfg_.miners) nodes_[m]->miner = true;
  }
}

Simulation::~Simulation() = default;

void Simulation::register_bank(const Digest& bank_id, const ledger::DenominationKeys& keys) {
  for (auto& n : nodes_) n->chain.register_bank(bank_id, keys);
}

const ledger::Chain& Simulation::chain(std::size_t node) const { return nodes_.at(node)->chain; }

const std::vector<coin::CoinInstance>& Simulation::mempool(std::size_t node) const {
  return nodes_.at(node)->mempool;
}

wallet::Network& Simulation::endpoint(std::size_t node) { return *endpoints_.at(node); }

void Simulation::log_reject(std::size_t node, bool is_block, const Digest& item,
                            ledger::Reject why) {
  rejects_.push_back(RejectEntry{now_, node, is_block, item, why});
}

void Simulation::schedule(std::size_t from, const Payload& payload, std::size_t skip) {
  const std::uint64_t spread = cfg_.delay.max_ticks - cfg_.delay.min_ticks + 1;
  for (std::size_t peer : nodes_[from]->peers) {
    if (peer == skip) continue;
    std::uint64_t delay = cfg_.delay.min_ticks + rng_.below(spread);
    events_.push(Event{now_ + delay, seq_++, peer, from, payload});
  }
}

void Simulation::broadcast(std::size_t origin, const coin::CoinInstance& c) {
  receive_instance(origin, origin, c);
}

void Simulation::receive_instance(std::size_t node, std::size_t from,
                                  const coin::CoinInstance& c) {
  Node& n = *nodes_[node];
  const Digest id = coin::instance_hash(c);
  if (!n.seen_instances.insert(id).second) return;
  if (n.chain.confirmations(coin::tx_hash(c.tx))) return;

  // First seen wins: one pending instance per coin.
  if (n.in_mempool(c.tx.coin)) {
    log_reject(node, false, id, ledger::Reject::kMempoolConflict);
    return;
  }
  if (auto why = n.chain.validate_against_tip(c)) {
    log_reject(node, false, id, *why);
    return;
  }
  n.mempool.push_back(c);
  ++n.mempool_version;
  schedule(node, c, from);
}

void Simulation::receive_block(std::size_t node, std::size_t from, const ledger::Block& b) {
  Node& n = *nodes_[node];
  const Digest id = b.hash();
  if (!n.seen_blocks.insert(id).second) return;

  std::vector<const ledger::Block*> old_best = n.chain.best_chain();
  const Digest old_tip = n.chain.tip_hash();
  ledger::AppendResult res = n.chain.append_block(b);
  if (!res.accepted) {
    if (res.reject == ledger::Reject::kUnknownParent) {
      n.orphans[b.header.prev_hash].push_back(b);
      n.seen_blocks.erase(id);
    } else if (res.reject != ledger::Reject::kDuplicateBlock) {
      log_reject(node, true, id, *res.reject);
    }
    return;
  }
  schedule(node, b, from);

  if (res.tip_changed) {
    std::vector<coin::CoinInstance> orphaned;
    if (b.header.prev_hash != old_tip) {
      std::set<Digest> kept;
      for (const ledger::Block* blk : n.chain.best_chain()) kept.insert(blk->hash());
      for (const ledger::Block* blk : old_best) {
        if (kept.count(blk->hash()) != 0) continue;
        orphaned.insert(orphaned.end(), blk->instances.begin(), blk->instances.end());
      }
    }
    after_tip_change(node, orphaned);
  }

  auto waiting = n.orphans.find(id);
  if (waiting != n.orphans.end()) {
    std::vector<ledger::Block> children = std::move(waiting->second);
    n.orphans.erase(waiting);
    for (const auto& child : children) receive_block(node, from, child);
  }
}

void Simulation::after_tip_change(std::size_t node,
                                  const std::vector<coin::CoinInstance>& orphaned) {
  Node& n = *nodes_[node];
  std::vector<coin::CoinInstance> candidates = orphaned;
  candidates.insert(candidates.end(), n.mempool.begin(), n.mempool.end());
  n.mempool.clear();
  for (auto& c : candidates) {
    if (n.chain.confirmations(coin::tx_hash(c.tx))) continue;
    if (n.in_mempool(c.tx.coin)) continue;
    if (n.chain.validate_against_tip(c)) continue;
    n.mempool.push_back(std::move(c));
  }
  ++n.mempool_version;
}

void Simulation::mine(std::size_t node) {
  Node& n = *nodes_[node];
  if (n.mempool.empty() && waiting_ == 0) {
    n.draft.reset();
    return;
  }
  if (!n.draft || n.draft->header.prev_hash != n.chain.tip_hash() ||
      n.draft_version != n.mempool_version) {
    ledger::Block draft;
    draft.header.prev_hash = n.chain.tip_hash();
    draft.header.timestamp = now_;
    draft.header.difficulty = cfg_.difficulty;
    ledger::CoinIndex state = n.chain.tip_state();
    for (const auto& c : n.mempool) {
      if (draft.instances.size() >= cfg_.max_block_instances) break;
      if (ledger::validate_coin_instance(c, state, n.chain.banks())) continue;
      ledger::apply_instance(state, c, n.chain.height() + 1);
      draft.instances.push_back(c);
    }
    draft.header.merkle_root = ledger::block_merkle_root(draft.instances);
    n.draft_header = ledger::serialize_header(draft.header);
    n.draft = std::move(draft);
    n.draft_version = n.mempool_version;
    n.next_nonce = 0;
  }

  constexpr std::size_t kNonceOffset = 32 + 32 + 8;
  const std::uint64_t end = n.next_nonce + cfg_.hashes_per_tick;
  for (; n.next_nonce < end; ++n.next_nonce) {
    for (std::size_t i = 0; i < 8; ++i) {
      n.draft_header[kNonceOffset + i] = static_cast<std::uint8_t>(n.next_nonce >> (56 - 8 * i));
    }
    if (ledger::meets_difficulty(sha256(n.draft_header), cfg_.difficulty)) {
      ledger::Block found = std::move(*n.draft);
      found.header.nonce = n.next_nonce;
      n.draft.reset();
      receive_block(node, node, found);
      return;
    }
  }
}

void Simulation::step() {
  while (!events_.empty() && events_.top().tick <= now_) {
    Event ev = events_.top();
    events_.pop();
    if (const auto* c = std::get_if<coin::CoinInstance>(&ev.payload)) {
      receive_instance(ev.to, ev.from, *c);
    } else {
      receive_block(ev.to, ev.from, std::get<ledger::Block>(ev.payload));
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i]->miner) mine(i);
  }
  ++now_;
}

void Simulation::run_for(std::uint64_t ticks) {
  for (std::uint64_t i = 0; i < ticks; ++i) step();
}

bool Simulation::run_until(const std::function<bool()>& done, std::uint64_t max_ticks) {
  for (std::uint64_t i = 0; i < max_ticks; ++i) {
    if (done()) return true;
    step();
  }
  return done();
}

bool Simulation::quiescent() const {
  if (!events_.empty() || waiting_ != 0) return false;
  return std::all_of(nodes_.begin(), nodes_.end(),
                     [](const auto& n) { return n->mempool.empty(); });
}

bool Simulation::run_to_quiescence(std::uint64_t max_ticks) {
  return run_until([this] { return quiescent(); }, max_ticks);
}

wallet::WaitOutcome Simulation::await_confirmation(std::size_t node, const Digest& tx_hash,
                                                   const Digest& parent_hash) {
  struct WaitGuard {
    std::size_t& count;
    explicit WaitGuard(std::size_t& c) : count(c) { ++count; }
    ~WaitGuard() { --count; }
  } guard(waiting_);

  const Node& n = *nodes_.at(node);
  const unsigned depth = cfg_.confirm_depth;
  wallet::WaitOutcome outcome = wallet::WaitOutcome::kTimeout;
  auto settled = [&] {
    if (auto conf = n.chain.confirmations(tx_hash); conf && *conf >= depth) {
      outcome = wallet::WaitOutcome::kConfirmed;
      return true;
    }
    if (is_zero(parent_hash)) return false;
    auto rival = n.chain.child_of(parent_hash);
    if (!rival || *rival == tx_hash) return false;
    auto rival_conf = n.chain.confirmations(*rival);
    const bool still_pending =
        std::any_of(n.mempool.begin(), n.mempool.end(),
                    [&](const coin::CoinInstance& c) { return coin::tx_hash(c.tx) == tx_hash; });
    if (rival_conf && *rival_conf >= depth && !still_pending) {
      outcome = wallet::WaitOutcome::kConflict;
      return true;
    }
    return false;
  };
  run_until(settled, cfg_.max_wait_ticks);
  return outcome;
}

bool Simulation::converged() const {
  const Digest& tip = nodes_.front()->chain.tip_hash();
  return std::all_of(nodes_.begin(), nodes_.end(),
                     [&](const auto& n) { return n->chain.tip_hash() == tip; });
}

}  // namespace tcash::sim
