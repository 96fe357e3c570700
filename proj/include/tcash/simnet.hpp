#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tcash/coinmodel.hpp"
#include "tcash/ledger.hpp"
#include "tcash/profile.hpp"
#include "tcash/rng.hpp"
#include "tcash/wallet.hpp"

namespace tcash::sim {

/// Per-message latency, drawn uniformly from [min_ticks, max_ticks].
struct DelayModel {
  std::uint64_t min_ticks = 1;
  std::uint64_t max_ticks = 3;
};

struct SimConfig {
  std::size_t nodes = 3;
  std::vector<std::size_t> miners;  // empty: every node mines
  std::uint32_t difficulty = 12;
  unsigned confirm_depth = 1;
  std::uint64_t seed = 1;
  DelayModel delay;
  std::vector<std::pair<std::size_t, std::size_t>> links;  // empty: full mesh
  std::uint64_t hashes_per_tick = 256;
  std::uint64_t max_wait_ticks = 20000;
  std::size_t max_block_instances = 64;
  const Profile* profile = &kToyProfile;
};

/// Throws Errc::kDomain for an unusable configuration.
void validate_config(const SimConfig& cfg);

struct RejectEntry {
  std::uint64_t tick = 0;
  std::size_t node = 0;
  bool is_block = false;
  Digest item{};
  ledger::Reject reason = ledger::Reject::kMalformed;
};

/// Deterministic logical-tick network of full nodes. Events are processed in
/// (tick, sequence) order; miners search nonces with a fixed budget per tick.
class Simulation {
 public:
  explicit Simulation(SimConfig cfg);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const SimConfig& config() const { return cfg_; }
  std::uint64_t now() const { return now_; }
  std::size_t node_count() const { return nodes_.size(); }

  /// Publishes bank keys to every node.
  void register_bank(const Digest& bank_id, const ledger::DenominationKeys& keys);

  /// Admits the instance at `origin` now and floods it to peers.
  void broadcast(std::size_t origin, const coin::CoinInstance& c);

  /// Advances one tick: deliveries due now, then one mining round.
  void step();
  void run_for(std::uint64_t ticks);

  /// Steps until `done()` holds or `max_ticks` pass. Returns done().
  bool run_until(const std::function<bool()>& done, std::uint64_t max_ticks);

  /// No queued events, empty mempools, nobody waiting on confirmations.
  bool quiescent() const;
  bool run_to_quiescence(std::uint64_t max_ticks);

  /// Waits until the transaction is buried `confirm_depth` deep on `node`.
  wallet::WaitOutcome await_confirmation(std::size_t node, const Digest& tx_hash,
                                         const Digest& parent_hash);

  const ledger::Chain& chain(std::size_t node) const;
  const std::vector<coin::CoinInstance>& mempool(std::size_t node) const;
  const std::vector<RejectEntry>& reject_log() const { return rejects_; }

  /// All nodes share one best tip.
  bool converged() const;

  /// Network handle a wallet attached to `node` uses.
  wallet::Network& endpoint(std::size_t node);

 private:
  struct Node;
  class Endpoint;

  using Payload = std::variant<coin::CoinInstance, ledger::Block>;
  struct Event {
    std::uint64_t tick;
    std::uint64_t seq;
    std::size_t to;
    std::size_t from;
    Payload payload;
  };
  struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
      return a.tick != b.tick ? a.tick > b.tick : a.seq > b.seq;
    }
  };

  void schedule(std::size_t from, const Payload& payload, std::size_t skip);
  void receive_instance(std::size_t node, std::size_t from, const coin::CoinInstance& c);
  void receive_block(std::size_t node, std::size_t from, const ledger::Block& b);
  void after_tip_change(std::size_t node, const std::vector<coin::CoinInstance>& orphaned);
  void mine(std::size_t node);
  void log_reject(std::size_t node, bool is_block, const Digest& item, ledger::Reject why);

  SimConfig cfg_;
  std::uint64_t now_ = 0;
  std::uint64_t seq_ = 0;
  Rng rng_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<std::unique_ptr<Endpoint>> endpoints_;
  std::priority_queue<Event, std::vector<Event>, EventOrder> events_;
  std::vector<RejectEntry> rejects_;
  std::size_t waiting_ = 0;
};

}  // namespace tcash::sim
