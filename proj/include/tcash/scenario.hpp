#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tcash/bytes.hpp"
#include "tcash/coinmodel.hpp"
#include "tcash/simnet.hpp"
#include "tcash/wallet.hpp"

namespace tcash::sim {

/// One line of a scenario script. Grammar (one command per line, `#` starts
/// a comment, names are bare words):
///
///   bank <bank>
///   wallet <wallet> <bank> <opening-balance-cents> [node]
///   mint <wallet> <val-cents> <coin>
///   transfer <coin> <from> <to>
///   double-spend <coin> <from> <to1> <to2>
///   redeem <coin> <wallet>
///   advance-ticks <n>
///   dump-ledger <node>
///   assert-balance <wallet> <cents>        coin value held by the wallet
///   assert-account <wallet> <cents>        fiat balance at the wallet's bank
///   assert-escrow <cents>
///   assert-owner <coin> <wallet>
///   assert-instances <coin> <n>            on every node's best chain
///   assert-status <wallet> <coin> <pending|confirmed|spending|spent|flagged>
struct Command {
  std::size_t line = 0;
  std::string verb;
  std::vector<std::string> args;
  std::string text;
};

struct Scenario {
  std::vector<Command> commands;
};

/// Checks verbs and argument counts. Throws Errc::kScript naming the line.
Scenario parse_scenario(std::string_view text);

struct StepRecord {
  std::size_t line = 0;
  std::string command;
  std::int64_t escrow = 0;
  std::int64_t outstanding = 0;
  std::string note;
};

struct AssertionRecord {
  std::size_t line = 0;
  std::string command;
  bool passed = false;
  std::string detail;
};

struct DoubleSpendRecord {
  std::size_t line = 0;
  std::string coin;
  std::vector<std::string> payees;
  std::vector<wallet::WaitOutcome> outcomes;
  std::vector<Digest> tx_hashes;
  /// Per node: how many of the competing transactions its best chain holds.
  std::vector<std::size_t> confirmed_per_node;
};

struct EntrySummary {
  std::string wallet;
  std::string coin;
  wallet::EntryStatus status = wallet::EntryStatus::kPending;
  bool flagged = false;
};

struct SimReport {
  std::string text;    // stable, diffable summary
  Bytes ledger;        // best chain of the dumped node
  std::string params;  // companion chain parameters
  std::vector<StepRecord> steps;
  std::vector<AssertionRecord> assertions;
  std::vector<DoubleSpendRecord> double_spends;
  std::vector<EntrySummary> entries;
  std::size_t assertion_failures = 0;
  std::size_t escrow_violations = 0;
  bool converged = false;
  bool single_spend_ok = false;
};

/// Executes the script to quiescence. Identical inputs give identical
/// reports, byte for byte. Script errors throw Errc::kScript with the line.
SimReport run(const SimConfig& cfg, const Scenario& scenario);

}  // namespace tcash::sim
