// Command-line front end: run scenarios, audit ledgers, inspect coins.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tcash/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tcash: transferable e-cash simulator and ledger auditor"};
  app.require_subcommand(1);

  tcash::cli::RunManifest m;
  auto* run = app.add_subcommand("run", "Execute a scenario and write ledger and report");
  run->add_option("--scenario", m.scenario, "Scenario script")->envname("TCASH_SCENARIO");
  run->add_option("--profile", m.profile, "toy or standard")->envname("TCASH_PROFILE");
  run->add_option("--seed", m.seed, "Master seed")->envname("TCASH_SEED");
  run->add_option("--difficulty", m.difficulty, "Leading zero bits per block")
      ->envname("TCASH_DIFFICULTY");
  run->add_option("--confirm-depth", m.confirm_depth, "Blocks before a payment is final")
      ->envname("TCASH_CONFIRM_DEPTH")
      ->check(CLI::PositiveNumber);
  run->add_option("--nodes", m.nodes, "Simulated full nodes")->envname("TCASH_NODES");
  run->add_option("--out-ledger", m.ledger, "Ledger output path")->envname("TCASH_OUT_LEDGER");
  run->add_option("--out-report", m.report, "Report output path (default stdout)")
      ->envname("TCASH_OUT_REPORT");

  std::string ledger;
  std::string params;
  auto* audit = app.add_subcommand("audit", "Re-verify a ledger file");
  audit->add_option("ledger", ledger, "Ledger file")->required();
  audit->add_option("--params", params, "Parameters file (default <ledger>.params)");

  std::string sn;
  std::uint64_t val = 0;
  std::string bank;
  auto* inspect = app.add_subcommand("inspect", "Print one coin's chain of custody");
  inspect->add_option("ledger", ledger, "Ledger file")->required();
  inspect->add_option("--sn", sn, "Serial number, 64 hex digits")->required();
  inspect->add_option("--val", val, "Denomination in cents")->required();
  inspect->add_option("--bank", bank, "Bank name or 64-digit hex id")->required();
  inspect->add_option("--params", params, "Parameters file (default <ledger>.params)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : tcash::cli::kExitUsage;
  }

  if (run->parsed()) return tcash::cli::cmd_run(m, std::cout, std::cerr);
  if (audit->parsed()) return tcash::cli::cmd_audit(ledger, params, std::cout, std::cerr);
  return tcash::cli::cmd_inspect(ledger, params, sn, val, bank, std::cout, std::cerr);
}
