#include "tcash/cli.hpp"

#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include "tcash/audit.hpp"
#include "tcash/errors.hpp"
#include "tcash/params.hpp"
#include "tcash/profile.hpp"
#include "tcash/scenario.hpp"

namespace tcash::cli {

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  return static_cast<bool>(out);
}

std::string_view as_chars(const Bytes& b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

ByteView as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

struct Loaded {
  std::string ledger;
  ledger::ChainParams params;
};

// Returns an exit code on failure.
std::variant<Loaded, int> load(const std::string& ledger_path, const std::string& params_path,
                               std::ostream& err) {
  const std::string pp = params_path.empty() ? params_path_for(ledger_path) : params_path;
  auto ledger_text = read_file(ledger_path);
  if (!ledger_text) {
    err << "error: cannot read ledger '" << ledger_path << "'\n";
    return kExitIo;
  }
  auto params_text = read_file(pp);
  if (!params_text) {
    err << "error: cannot read parameters '" << pp << "'\n";
    return kExitIo;
  }
  try {
    return Loaded{std::move(*ledger_text), ledger::parse_params(*params_text)};
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}

}  // namespace

std::string params_path_for(const std::string& ledger_path) { return ledger_path + ".params"; }

int cmd_run(const RunManifest& m, std::ostream& out, std::ostream& err) {
  if (m.scenario.empty()) {
    err << "usage: a scenario file is required\n";
    return kExitUsage;
  }
  sim::SimConfig cfg;
  try {
    cfg.profile = &profile_by_name(m.profile);
  } catch (const Error& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  }
  cfg.seed = m.seed;
  cfg.difficulty = m.difficulty;
  cfg.confirm_depth = m.confirm_depth;
  cfg.nodes = m.nodes;
  try {
    sim::validate_config(cfg);
  } catch (const Error& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  }

  auto text = read_file(m.scenario);
  if (!text) {
    err << "usage: cannot read scenario '" << m.scenario << "'\n";
    return kExitUsage;
  }

  sim::SimReport report;
  try {
    report = sim::run(cfg, sim::parse_scenario(*text));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::kScript ? kExitUsage : kExitViolation;
  }

  if (!m.ledger.empty()) {
    if (!write_file(m.ledger, as_chars(report.ledger)) ||
        !write_file(params_path_for(m.ledger), report.params)) {
      err << "error: cannot write ledger '" << m.ledger << "'\n";
      return kExitIo;
    }
  }
  if (m.report.empty()) {
    out << report.text;
  } else if (!write_file(m.report, report.text)) {
    err << "error: cannot write report '" << m.report << "'\n";
    return kExitIo;
  }

  for (const auto& a : report.assertions) {
    if (!a.passed) err << "assertion failed: line " << a.line << ": " << a.command << ": " << a.detail << "\n";
  }
  if (report.escrow_violations != 0) {
    err << "escrow diverged from outstanding coins in " << report.escrow_violations << " steps\n";
  }
  return report.assertion_failures == 0 && report.escrow_violations == 0 ? kExitOk
                                                                         : kExitAssertion;
}

int cmd_audit(const std::string& ledger_path, const std::string& params_path, std::ostream& out,
              std::ostream& err) {
  auto loaded = load(ledger_path, params_path, err);
  if (auto* code = std::get_if<int>(&loaded)) return *code;
  const Loaded& l = std::get<Loaded>(loaded);

  audit::AuditReport report = audit::audit_ledger(as_bytes(l.ledger), l.params);
  out << audit::format_report(report);
  if (!report.valid()) {
    const auto& v = *report.violation;
    err << "violation: block " << v.block;
    if (v.instance) err << " instance " << *v.instance;
    err << " rule " << v.rule << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_inspect(const std::string& ledger_path, const std::string& params_path,
                const std::string& sn_hex, std::uint64_t val, const std::string& bank,
                std::ostream& out, std::ostream& err) {
  auto loaded = load(ledger_path, params_path, err);
  if (auto* code = std::get_if<int>(&loaded)) return *code;
  const Loaded& l = std::get<Loaded>(loaded);

  coin::CoinId id;
  id.val = val;
  try {
    id.sn = digest_from_hex(sn_hex);
  } catch (const Error&) {
    err << "usage: serial number must be 64 hex digits\n";
    return kExitUsage;
  }
  bool bank_found = false;
  for (const auto& [bid, name] : l.params.bank_names) {
    if (name == bank) {
      id.bank = bid;
      bank_found = true;
    }
  }
  if (!bank_found) {
    try {
      id.bank = digest_from_hex(bank);
    } catch (const Error&) {
      err << "usage: unknown bank '" << bank << "'\n";
      return kExitUsage;
    }
  }

  audit::AuditReport report = audit::audit_ledger(as_bytes(l.ledger), l.params);
  const audit::Custody* c = report.find(id);
  if (c == nullptr) {
    err << "not found: no coin with that (sn, val, bank)\n";
    return kExitViolation;
  }
  out << audit::format_custody(*c);
  if (!report.valid()) {
    err << "warning: ledger fails audit at block " << report.violation->block << " rule "
        << report.violation->rule << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

}  // namespace tcash::cli
