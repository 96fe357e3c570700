#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace tcash::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitAssertion = 3,
  kExitViolation = 4,
  kExitIo = 5,
};

struct RunManifest {
  std::string profile = "toy";
  std::string scenario;
  std::string ledger;  // empty: not written
  std::string report;  // empty: printed to `out`
  std::uint64_t seed = 1;
  std::uint32_t difficulty = 12;
  unsigned confirm_depth = 1;
  std::size_t nodes = 3;
};

/// Path of the companion parameters file for a ledger.
std::string params_path_for(const std::string& ledger_path);

/// Runs the scenario and writes the ledger, its `.params` companion and the
/// report. Exit 0 iff every assertion held and escrow tracked the
/// outstanding coins after every step.
int cmd_run(const RunManifest& m, std::ostream& out, std::ostream& err);

/// `params` empty: `<ledger>.params`.
int cmd_audit(const std::string& ledger, const std::string& params, std::ostream& out,
              std::ostream& err);

/// `bank` is a 64-digit hex id or a bank name listed in the params file.
int cmd_inspect(const std::string& ledger, const std::string& params, const std::string& sn_hex,
                std::uint64_t val, const std::string& bank, std::ostream& out, std::ostream& err);

}  // namespace tcash::cli
