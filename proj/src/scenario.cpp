#include "tcash/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <memory>
#include <sstream>

#include "tcash/bank.hpp"
#include "tcash/errors.hpp"
#include "tcash/params.hpp"

namespace tcash::sim {

namespace {

struct VerbSpec {
  std::string_view verb;
  std::size_t min_args;
  std::size_t max_args;
};

constexpr VerbSpec kVerbs[] = {
    {"bank", 1, 1},           {"wallet", 3, 4},         {"mint", 3, 3},
    {"transfer", 3, 3},       {"double-spend", 4, 4},   {"redeem", 2, 2},
    {"advance-ticks", 1, 1},  {"dump-ledger", 1, 1},    {"assert-balance", 2, 2},
    {"assert-account", 2, 2}, {"assert-escrow", 1, 1},  {"assert-owner", 2, 2},
    {"assert-instances", 2, 2}, {"assert-status", 3, 3},
};

std::uint64_t parse_count(const std::string& word) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc() || ptr != word.data() + word.size()) {
    throw Error(Errc::kScript, "expected a non-negative integer, got '" + word + "'");
  }
  return v;
}

std::string short_hex(const Digest& d) { return to_hex(d).substr(0, 16); }

class Runner {
 public:
  explicit Runner(const SimConfig& cfg) : cfg_(cfg), sim_(cfg) {}

  SimReport execute(const Scenario& scenario);

 private:
  struct WalletSlot {
    std::unique_ptr<wallet::Wallet> wallet;
    std::string bank;
    std::size_t node = 0;
  };
  struct BankSlot {
    std::unique_ptr<bank::Bank> bank;
    std::size_t node = 0;
  };
  struct CoinTrack {
    coin::CoinId id;
    std::string owner;
    bool redeemed = false;
  };

  void dispatch(const Command& cmd, StepRecord& step);
  void assertion(const Command& cmd);

  WalletSlot& wallet_slot(const std::string& name);
  BankSlot& bank_slot(const std::string& name);
  CoinTrack& coin_track(const std::string& label);

  // Lets `node` catch up until its view of the coin reaches `tx_hash`.
  void sync_view(std::size_t node, const coin::CoinId& id, const Digest& tx_hash);
  std::size_t instances_on_chain(std::size_t node, const coin::CoinId& id) const;
  std::int64_t outstanding_value() const;
  std::string coin_label(const coin::CoinId& id) const;
  bool single_spend_holds() const;
  std::string render(const SimReport& report) const;

  SimConfig cfg_;
  Simulation sim_;
  bank::Escrow escrow_;
  std::map<std::string, BankSlot> banks_;
  std::vector<std::string> bank_order_;
  std::map<std::string, WalletSlot> wallets_;
  std::vector<std::string> wallet_order_;
  std::map<std::string, CoinTrack> coins_;
  std::vector<std::string> coin_order_;
  std::optional<std::size_t> dumped_node_;
  Bytes dumped_ledger_;
  SimReport report_;
};

Runner::WalletSlot& Runner::wallet_slot(const std::string& name) {
  auto it = wallets_.find(name);
  if (it == wallets_.end()) throw Error(Errc::kScript, "unknown wallet '" + name + "'");
  return it->second;
}

Runner::BankSlot& Runner::bank_slot(const std::string& name) {
  auto it = banks_.find(name);
  if (it == banks_.end()) throw Error(Errc::kScript, "unknown bank '" + name + "'");
  return it->second;
}

Runner::CoinTrack& Runner::coin_track(const std::string& label) {
  auto it = coins_.find(label);
  if (it == coins_.end()) throw Error(Errc::kScript, "unknown coin '" + label + "'");
  return it->second;
}

void Runner::sync_view(std::size_t node, const coin::CoinId& id, const Digest& tx_hash) {
  const unsigned depth = cfg_.confirm_depth;
  sim_.run_until(
      [&] {
        auto rec = sim_.chain(node).lookup_latest(id, depth);
        return rec && rec->tx_hash == tx_hash;
      },
      cfg_.max_wait_ticks);
}

std::size_t Runner::instances_on_chain(std::size_t node, const coin::CoinId& id) const {
  std::size_t count = 0;
  for (const ledger::Block* b : sim_.chain(node).best_chain()) {
    count += static_cast<std::size_t>(std::count_if(
        b->instances.begin(), b->instances.end(),
        [&](const coin::CoinInstance& c) { return c.tx.coin == id; }));
  }
  return count;
}

std::int64_t Runner::outstanding_value() const {
  std::int64_t total = 0;
  for (const auto& [label, track] : coins_) {
    if (!track.redeemed) total += static_cast<std::int64_t>(track.id.val);
  }
  return total;
}

std::string Runner::coin_label(const coin::CoinId& id) const {
  for (const auto& [label, track] : coins_) {
    if (track.id == id) return label;
  }
  return short_hex(id.sn);
}

bool Runner::single_spend_holds() const {
  for (std::size_t n = 0; n < sim_.node_count(); ++n) {
    std::map<Digest, int> children;
    std::map<coin::CoinId, int> geneses;
    for (const ledger::Block* b : sim_.chain(n).best_chain()) {
      for (const auto& c : b->instances) {
        int count = c.tx.is_genesis() ? ++geneses[c.tx.coin] : ++children[c.tx.h_prev];
        if (count > 1) return false;
      }
    }
  }
  return true;
}

void Runner::dispatch(const Command& cmd, StepRecord& step) {
  const auto& a = cmd.args;
  const unsigned depth = cfg_.confirm_depth;

  if (cmd.verb == "bank") {
    if (banks_.count(a[0]) != 0) throw Error(Errc::kScript, "bank '" + a[0] + "' exists");
    BankSlot slot;
    slot.bank = std::make_unique<bank::Bank>(a[0], *cfg_.profile,
                                             Rng::derive_seed(cfg_.seed, "bank:" + a[0]), escrow_);
    slot.node = banks_.size() % sim_.node_count();
    sim_.register_bank(slot.bank->id(), slot.bank->publish_keys());
    banks_.emplace(a[0], std::move(slot));
    bank_order_.push_back(a[0]);
  } else if (cmd.verb == "wallet") {
    if (wallets_.count(a[0]) != 0) throw Error(Errc::kScript, "wallet '" + a[0] + "' exists");
    BankSlot& b = bank_slot(a[1]);
    b.bank->open_account(a[0], static_cast<std::int64_t>(parse_count(a[2])));
    WalletSlot slot;
    slot.wallet = std::make_unique<wallet::Wallet>(a[0], *cfg_.profile, cfg_.seed);
    slot.bank = a[1];
    slot.node = a.size() == 4 ? parse_count(a[3]) : wallets_.size() % sim_.node_count();
    if (slot.node >= sim_.node_count()) throw Error(Errc::kScript, "node index out of range");
    wallets_.emplace(a[0], std::move(slot));
    wallet_order_.push_back(a[0]);
  } else if (cmd.verb == "mint") {
    WalletSlot& w = wallet_slot(a[0]);
    if (coins_.count(a[2]) != 0) throw Error(Errc::kScript, "coin '" + a[2] + "' exists");
    BankSlot& b = bank_slot(w.bank);
    b.bank->set_time(sim_.now());
    const auto& entry =
        w.wallet->request_mint(*b.bank, a[0], parse_count(a[1]), sim_.endpoint(w.node));
    coin::CoinId id = entry.coin;
    coins_.emplace(a[2], CoinTrack{id, a[0], false});
    coin_order_.push_back(a[2]);
    auto outcome = w.wallet->await_settlement(id, sim_.endpoint(w.node));
    step.note = std::string("mint ") + std::string(wallet::to_string(outcome));
  } else if (cmd.verb == "transfer") {
    CoinTrack& track = coin_track(a[0]);
    WalletSlot& from = wallet_slot(a[1]);
    WalletSlot& to = wallet_slot(a[2]);
    const wallet::WalletEntry* held = from.wallet->find(track.id);
    if (held == nullptr) throw Error(Errc::kScript, a[1] + " does not hold " + a[0]);
    sync_view(to.node, track.id, held->last_tx_hash);

    wallet::PaymentOffer offer = from.wallet->initiate_payment(track.id);
    Nat m_blinded = to.wallet->receive_payment(offer, sim_.chain(to.node), depth);
    Nat s_blinded = from.wallet->sign_transfer(track.id, m_blinded);
    auto outcome = to.wallet->finalize_receipt(track.id, s_blinded, sim_.endpoint(to.node));
    if (outcome == wallet::WaitOutcome::kConfirmed) track.owner = a[2];
    step.note = std::string("transfer ") + std::string(wallet::to_string(outcome));
  } else if (cmd.verb == "double-spend") {
    CoinTrack& track = coin_track(a[0]);
    WalletSlot& from = wallet_slot(a[1]);
    if (a[2] == a[3]) throw Error(Errc::kScript, "double-spend needs two distinct payees");
    WalletSlot* payees[2] = {&wallet_slot(a[2]), &wallet_slot(a[3])};
    const wallet::WalletEntry* held = from.wallet->find(track.id);
    if (held == nullptr) throw Error(Errc::kScript, a[1] + " does not hold " + a[0]);
    const Digest spent_tx = held->last_tx_hash;
    for (WalletSlot* p : payees) sync_view(p->node, track.id, spent_tx);

    wallet::PaymentOffer offer = from.wallet->initiate_payment(track.id);
    Nat m0 = payees[0]->wallet->receive_payment(offer, sim_.chain(payees[0]->node), depth);
    Nat m1 = payees[1]->wallet->receive_payment(offer, sim_.chain(payees[1]->node), depth);
    Nat s0 = from.wallet->sign_transfer(track.id, m0);
    Nat s1 = from.wallet->sign_conflicting_transfer(track.id, m1);

    DoubleSpendRecord rec;
    rec.line = cmd.line;
    rec.coin = a[0];
    rec.payees = {a[2], a[3]};
    const auto& e0 = payees[0]->wallet->submit_receipt(track.id, s0, sim_.endpoint(payees[0]->node));
    rec.tx_hashes.push_back(e0.last_tx_hash);
    const auto& e1 = payees[1]->wallet->submit_receipt(track.id, s1, sim_.endpoint(payees[1]->node));
    rec.tx_hashes.push_back(e1.last_tx_hash);
    for (int i = 0; i < 2; ++i) {
      rec.outcomes.push_back(
          payees[i]->wallet->await_settlement(track.id, sim_.endpoint(payees[i]->node)));
    }
    sim_.run_to_quiescence(cfg_.max_wait_ticks);
    for (std::size_t n = 0; n < sim_.node_count(); ++n) {
      std::size_t count = 0;
      for (const Digest& h : rec.tx_hashes) {
        if (sim_.chain(n).confirmations(h)) ++count;
      }
      rec.confirmed_per_node.push_back(count);
    }
    track.owner.clear();
    for (int i = 0; i < 2; ++i) {
      if (sim_.chain(0).confirmations(rec.tx_hashes[i])) track.owner = rec.payees[i];
    }
    step.note = "double-spend " + rec.payees[0] + "=" +
                std::string(wallet::to_string(rec.outcomes[0])) + " " + rec.payees[1] + "=" +
                std::string(wallet::to_string(rec.outcomes[1]));
    report_.double_spends.push_back(std::move(rec));
  } else if (cmd.verb == "redeem") {
    CoinTrack& track = coin_track(a[0]);
    WalletSlot& w = wallet_slot(a[1]);
    BankSlot& b = bank_slot(w.bank);
    const wallet::WalletEntry* held = w.wallet->find(track.id);
    if (held == nullptr) throw Error(Errc::kScript, a[1] + " does not hold " + a[0]);
    sync_view(b.node, track.id, held->last_tx_hash);

    wallet::PaymentOffer offer = w.wallet->initiate_payment(track.id);
    bank::RedeemRequest req = b.bank->redeem(offer, a[1], sim_.chain(b.node), depth);
    Nat s_blinded = w.wallet->sign_transfer(track.id, req.m_blinded);
    coin::CoinInstance terminal = b.bank->complete_redeem(req.ticket, s_blinded);
    sim_.broadcast(b.node, terminal);
    auto outcome = sim_.await_confirmation(b.node, coin::tx_hash(terminal.tx), terminal.tx.h_prev);
    if (outcome == wallet::WaitOutcome::kConfirmed) {
      b.bank->settle_redeem(req.ticket, sim_.chain(b.node), depth);
      track.redeemed = true;
      track.owner = "bank:" + w.bank;
    } else {
      b.bank->abort_redeem(req.ticket);
    }
    step.note = std::string("redeem ") + std::string(wallet::to_string(outcome));
  } else if (cmd.verb == "advance-ticks") {
    sim_.run_for(parse_count(a[0]));
  } else if (cmd.verb == "dump-ledger") {
    std::size_t node = parse_count(a[0]);
    if (node >= sim_.node_count()) throw Error(Errc::kScript, "node index out of range");
    dumped_node_ = node;
    dumped_ledger_ = ledger::serialize_blocks(sim_.chain(node).best_chain());
  } else {
    assertion(cmd);
  }
}

void Runner::assertion(const Command& cmd) {
  const auto& a = cmd.args;
  AssertionRecord rec;
  rec.line = cmd.line;
  rec.command = cmd.text;

  auto expect_eq = [&](std::int64_t want, std::int64_t got) {
    rec.passed = want == got;
    if (!rec.passed) rec.detail = "expected " + std::to_string(want) + ", got " + std::to_string(got);
  };

  if (cmd.verb == "assert-balance") {
    expect_eq(static_cast<std::int64_t>(parse_count(a[1])),
              static_cast<std::int64_t>(wallet_slot(a[0]).wallet->balance()));
  } else if (cmd.verb == "assert-account") {
    WalletSlot& w = wallet_slot(a[0]);
    expect_eq(static_cast<std::int64_t>(parse_count(a[1])),
              bank_slot(w.bank).bank->account_balance(a[0]));
  } else if (cmd.verb == "assert-escrow") {
    expect_eq(static_cast<std::int64_t>(parse_count(a[0])), escrow_.balance());
  } else if (cmd.verb == "assert-owner") {
    CoinTrack& track = coin_track(a[0]);
    const wallet::WalletEntry* e = wallet_slot(a[1]).wallet->find(track.id);
    const bool holds = e != nullptr && (e->status == wallet::EntryStatus::kConfirmed ||
                                        e->status == wallet::EntryStatus::kSpending);
    rec.passed = holds && track.owner == a[1];
    if (!rec.passed) rec.detail = "owner is '" + track.owner + "'";
  } else if (cmd.verb == "assert-instances") {
    CoinTrack& track = coin_track(a[0]);
    const auto want = static_cast<std::int64_t>(parse_count(a[1]));
    sim_.run_to_quiescence(cfg_.max_wait_ticks);
    rec.passed = true;
    for (std::size_t n = 0; n < sim_.node_count(); ++n) {
      auto got = static_cast<std::int64_t>(instances_on_chain(n, track.id));
      if (got != want) {
        rec.passed = false;
        rec.detail = "node " + std::to_string(n) + " holds " + std::to_string(got);
        break;
      }
    }
  } else if (cmd.verb == "assert-status") {
    CoinTrack& track = coin_track(a[1]);
    const wallet::WalletEntry* e = wallet_slot(a[0]).wallet->find(track.id);
    std::string got = "absent";
    if (e != nullptr) got = e->flagged ? "flagged" : std::string(wallet::to_string(e->status));
    rec.passed = got == a[2];
    if (!rec.passed) rec.detail = "status is " + got;
  }

  if (!rec.passed) ++report_.assertion_failures;
  report_.assertions.push_back(std::move(rec));
}

SimReport Runner::execute(const Scenario& scenario) {
  for (const Command& cmd : scenario.commands) {
    StepRecord step;
    step.line = cmd.line;
    step.command = cmd.text;
    try {
      dispatch(cmd, step);
    } catch (const Error& e) {
      throw Error(Errc::kScript, "line " + std::to_string(cmd.line) + " (" + cmd.text +
                                     "): " + e.what());
    }
    step.escrow = escrow_.balance();
    step.outstanding = outstanding_value();
    if (step.escrow != step.outstanding) ++report_.escrow_violations;
    report_.steps.push_back(std::move(step));
  }
  sim_.run_to_quiescence(cfg_.max_wait_ticks);

  const std::size_t node = dumped_node_.value_or(0);
  report_.ledger = dumped_node_ ? dumped_ledger_
                                : ledger::serialize_blocks(sim_.chain(node).best_chain());

  ledger::ChainParams params;
  params.profile = std::string(cfg_.profile->name);
  params.difficulty = cfg_.difficulty;
  for (const auto& [name, slot] : banks_) {
    params.banks[slot.bank->id()] = slot.bank->publish_keys();
    params.bank_names[slot.bank->id()] = name;
  }
  report_.params = ledger::format_params(params);

  for (const std::string& name : wallet_order_) {
    for (const auto& [id, e] : wallets_.at(name).wallet->entries()) {
      report_.entries.push_back(EntrySummary{name, coin_label(id), e.status, e.flagged});
    }
  }
  report_.converged = sim_.converged();
  report_.single_spend_ok = single_spend_holds();
  report_.text = render(report_);
  return std::move(report_);
}

std::string Runner::render(const SimReport& r) const {
  std::ostringstream out;
  out << "tcash-report 1\n";
  out << "profile " << cfg_.profile->name << "\n";
  out << "seed " << cfg_.seed << "\n";
  out << "nodes " << sim_.node_count() << "\n";
  out << "difficulty " << cfg_.difficulty << "\n";
  out << "confirm-depth " << cfg_.confirm_depth << "\n";
  for (const auto& s : r.steps) {
    out << "step " << s.line << " " << s.command << " | escrow=" << s.escrow
        << " outstanding=" << s.outstanding;
    if (!s.note.empty()) out << " | " << s.note;
    out << "\n";
  }
  for (const auto& a : r.assertions) {
    out << "assert " << a.line << " " << a.command << " | " << (a.passed ? "ok" : "FAIL");
    if (!a.detail.empty()) out << " | " << a.detail;
    out << "\n";
  }
  for (const auto& d : r.double_spends) {
    out << "double-spend " << d.line << " " << d.coin << " |";
    for (std::size_t i = 0; i < d.payees.size(); ++i) {
      out << " " << d.payees[i] << "=" << wallet::to_string(d.outcomes[i]);
    }
    out << " | confirmed-per-node";
    for (std::size_t c : d.confirmed_per_node) out << " " << c;
    out << "\n";
  }
  for (std::size_t n = 0; n < sim_.node_count(); ++n) {
    const ledger::Chain& c = sim_.chain(n);
    out << "node " << n << " height " << c.height() << " tip " << to_hex(c.tip_hash())
        << " blocks-known " << c.block_count() << " mempool " << sim_.mempool(n).size() << "\n";
  }
  for (const auto& rej : sim_.reject_log()) {
    out << "reject tick " << rej.tick << " node " << rej.node << " "
        << (rej.is_block ? "block " : "instance ") << short_hex(rej.item) << " "
        << ledger::to_string(rej.reason) << "\n";
  }
  for (const std::string& label : coin_order_) {
    const CoinTrack& t = coins_.at(label);
    std::string bank_name;
    for (const auto& [name, slot] : banks_) {
      if (slot.bank->id() == t.id.bank) bank_name = name;
    }
    out << "coin " << label << " sn " << to_hex(t.id.sn) << " val " << t.id.val << " bank "
        << to_hex(t.id.bank) << " (" << bank_name << ") owner "
        << (t.owner.empty() ? "-" : t.owner) << " redeemed " << (t.redeemed ? "yes" : "no")
        << " instances " << instances_on_chain(0, t.id) << "\n";
  }
  for (const std::string& name : wallet_order_) {
    const WalletSlot& w = wallets_.at(name);
    out << "wallet " << name << " bank " << w.bank << " node " << w.node << " balance "
        << w.wallet->balance() << " account " << banks_.at(w.bank).bank->account_balance(name)
        << "\n";
  }
  for (const auto& e : r.entries) {
    out << "entry " << e.wallet << " " << e.coin << " " << wallet::to_string(e.status)
        << (e.flagged ? " flagged" : "") << "\n";
  }
  out << "escrow " << escrow_.balance() << "\n";
  out << "summary ticks " << sim_.now() << " assertions " << r.assertions.size() << " failed "
      << r.assertion_failures << " escrow-violations " << r.escrow_violations << " converged "
      << (r.converged ? "yes" : "no") << " single-spend " << (r.single_spend_ok ? "yes" : "no")
      << "\n";
  return out.str();
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Command cmd;
    cmd.line = line_no;
    if (!(words >> cmd.verb)) continue;
    for (std::string w; words >> w;) cmd.args.push_back(w);

    auto spec = std::find_if(std::begin(kVerbs), std::end(kVerbs),
                             [&](const VerbSpec& v) { return v.verb == cmd.verb; });
    if (spec == std::end(kVerbs)) {
      throw Error(Errc::kScript, "line " + std::to_string(line_no) + ": unknown command '" +
                                     cmd.verb + "'");
    }
    if (cmd.args.size() < spec->min_args || cmd.args.size() > spec->max_args) {
      throw Error(Errc::kScript, "line " + std::to_string(line_no) + ": '" + cmd.verb +
                                     "' takes " + std::to_string(spec->min_args) +
                                     (spec->min_args == spec->max_args
                                          ? ""
                                          : "-" + std::to_string(spec->max_args)) +
                                     " arguments");
    }
    cmd.text = cmd.verb;
    for (const auto& w : cmd.args) cmd.text += " " + w;
    out.commands.push_back(std::move(cmd));
  }
  return out;
}

SimReport run(const SimConfig& cfg, const Scenario& scenario) {
  Runner runner(cfg);
  return runner.execute(scenario);
}

}  // namespace tcash::sim
