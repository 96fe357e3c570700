// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tcash/audit.hpp"
#include "tcash/bank.hpp"
#include "tcash/blindsig.hpp"
#include "tcash/cli.hpp"
#include "tcash/coinmodel.hpp"
#include "tcash/numtheory.hpp"
#include "tcash/params.hpp"
#include "tcash/profile.hpp"
#include "tcash/scenario.hpp"
#include "tcash/transfer.hpp"
#include "tcash/wallet.hpp"

using namespace tcash;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kBundled = {"happy_path", "transfer_chain", "double_spend",
                                           "double_spend_both_confirm", "multi_bank"};

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string source(const std::string& rel) { return std::string(TCASH_SOURCE_DIR) + "/" + rel; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "tcash_acceptance";
  fs::create_directories(dir);
  return dir / name;
}

sim::SimReport run_bundled(const std::string& name, std::uint64_t seed = 1) {
  sim::SimConfig cfg;
  cfg.seed = seed;
  return sim::run(cfg, sim::parse_scenario(slurp(source("scenarios/" + name + ".tcs"))));
}

Outcome homomorphism() {
  Outcome o;
  std::string summary;
  struct Run { const Profile* profile; double limit_s; };
  for (Run r : {Run{&kToyProfile, 5.0}, Run{&kStandardProfile, 60.0}}) {
    auto start = std::chrono::steady_clock::now();
    bs::KeyPair k = bs::keygen(r.profile->rsa_bits, 1001, r.profile->rsa_e, r.profile->mr_rounds);
    Rng rng(1002);
    int matches = 0;
    for (int i = 0; i < 100; ++i) {
      Nat m = rng.below(k.pub.n);
      auto bf = bs::BlindingFactor::random(k.pub.n, rng);
      Nat s = bs::unblind(bs::sign(bs::blind(m, bf, k.pub), k.priv), bf, k.pub.n);
      matches += s == bs::sign(m, k.priv) ? 1 : 0;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(matches == 100, std::string(r.profile->name) + ": " + std::to_string(matches) + "/100");
    o.check(secs < r.limit_s, std::string(r.profile->name) + " took " + std::to_string(secs) + " s");
    summary += std::string(summary.empty() ? "" : ", ") + std::string(r.profile->name) + " " +
               std::to_string(matches) + "/100 in " + std::to_string(secs) + " s";
  }
  if (o.pass) o.detail = summary;
  return o;
}

Outcome toy_vector() {
  Outcome o;
  bs::KeyPair k = bs::keypair_from_factors(5, 7, 5);
  o.check(k.pub.n == 35 && k.priv.d == 5, "keypair");
  bs::BlindingFactor r(2, 35);
  Nat mb = bs::blind(3, r, k.pub);
  Nat sb = bs::sign(mb, k.priv);
  Nat s = bs::unblind(sb, r, 35);
  o.check(mb == 26, "blind gave " + mb.get_str());
  o.check(sb == 31, "sign gave " + sb.get_str());
  o.check(s == 33, "unblind gave " + s.get_str());
  o.check(bs::verify(33, 3, k.pub), "verify(33, 3) false");
  if (o.pass) o.detail = "26 / 31 / 33 / verified";
  return o;
}

Outcome sizes() {
  Outcome o;
  bank::Escrow escrow;
  bank::Bank bank("acme", kStandardProfile, 3001, escrow);
  bank.open_account("alice", 1000);
  Rng rng(3002);
  wallet::OwnerSecrets sec = wallet::make_owner_secrets(kStandardProfile, rng);
  coin::CoinId id{rng.digest(), 1000, bank.id()};
  coin::CoinInstance c;
  c.tx = coin::make_genesis_tx(id, sec.dlp.public_part(), sec.keys.pub);
  const bs::PublicKey pk = bank.publish_keys().at(1000);
  Nat m = bs::digest_to_message(coin::tx_hash(c.tx), pk.n);
  auto bf = bs::BlindingFactor::random(pk.n, rng);
  c.sig = bs::unblind(bank.mint("alice", 1000, bs::blind(m, bf, pk)), bf, pk.n);
  o.check(bs::verify(c.sig, m, pk), "minted signature invalid");

  const std::size_t inst = coin::serialize_instance(c).size();
  wallet::WalletEntry e;
  e.coin = id;
  e.x = sec.dlp.x;
  e.sk = sec.keys.priv;
  const std::size_t core = wallet::encode_secret_core(e).size();
  o.check(inst == 1088, "instance " + std::to_string(inst) + " bytes");
  o.check(core == 416, "secret core " + std::to_string(core) + " bytes");
  if (o.pass) o.detail = "instance 1088 bytes, secret core 416 bytes";
  return o;
}

Outcome dlp_guard() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  auto guard = [&](const nt::DlpGroup& g, const std::string& label) {
    o.check(nt::is_probable_prime(g.q), label + ": q not prime");
    o.check((g.p - 1) % g.q == 0, label + ": q does not divide p-1");
    o.check(nt::mod_exp(g.alpha, g.q, g.p) == 1, label + ": alpha^q != 1");
    o.check(g.alpha != 1, label + ": alpha = 1");
  };
  for (std::uint64_t s = 1; s <= 20; ++s) {
    guard(nt::gen_dlp_group(kToyProfile.dlp_p_bits, kToyProfile.dlp_q_bits, s), "toy " + std::to_string(s));
  }
  for (std::uint64_t s = 1; s <= 2; ++s) {
    guard(nt::gen_dlp_group(kStandardProfile.dlp_p_bits, kStandardProfile.dlp_q_bits, s),
          "standard " + std::to_string(s));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(secs < 120.0, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "20 toy + 2 standard groups in " + std::to_string(secs) + " s";
  return o;
}

Outcome transfer_chain() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  cli::RunManifest m;
  m.scenario = source("scenarios/transfer_chain.tcs");
  m.ledger = scratch("transfer_chain.ledger").string();
  m.report = scratch("transfer_chain.report").string();
  std::ostringstream out, err;
  o.check(cli::cmd_run(m, out, err) == cli::kExitOk, "cmd_run failed: " + err.str());

  std::ostringstream aout, aerr;
  o.check(cli::cmd_audit(m.ledger, "", aout, aerr) == cli::kExitOk, "cmd_audit: " + aerr.str());

  const std::string report = slurp(m.report);
  const auto at = report.find("coin coin sn ");
  const std::string sn = at == std::string::npos ? "" : report.substr(at + 13, 64);
  std::ostringstream iout, ierr;
  o.check(cli::cmd_inspect(m.ledger, "", sn, 500, "acme", iout, ierr) == cli::kExitOk,
          "cmd_inspect: " + ierr.str());
  const std::string text = iout.str();
  std::size_t hops = 0, good = 0;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind("  hop ", 0) != 0) continue;
    ++hops;
    const bool genesis_ok = line.find(" genesis sig ok") != std::string::npos;
    const bool transfer_ok = line.find(" link ok dlp ok sig ok") != std::string::npos;
    if ((hops == 1 && genesis_ok) || (hops > 1 && transfer_ok)) ++good;
  }
  o.check(hops == 12, "instances on chain: " + std::to_string(hops));
  o.check(good == hops, std::to_string(good) + " of " + std::to_string(hops) + " hops verified");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(secs < 10.0, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "12 instances, audit 0, all hops verified";
  return o;
}

Outcome double_spend() {
  Outcome o;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    sim::SimReport r = run_bundled("double_spend", seed);
    o.check(r.double_spends.size() == 1, tag + "no double-spend record");
    if (r.double_spends.empty()) continue;
    const auto& d = r.double_spends[0];
    for (std::size_t n = 0; n < d.confirmed_per_node.size(); ++n) {
      o.check(d.confirmed_per_node[n] == 1, tag + "node " + std::to_string(n) + " holds " +
                                                std::to_string(d.confirmed_per_node[n]));
    }
    int winners = 0;
    for (std::size_t i = 0; i < d.payees.size(); ++i) {
      const bool won = d.outcomes[i] == wallet::WaitOutcome::kConfirmed;
      winners += won ? 1 : 0;
      bool flagged = false;
      for (const auto& e : r.entries) {
        if (e.wallet == d.payees[i] && e.coin == d.coin) flagged = e.flagged;
      }
      o.check(won != flagged, tag + d.payees[i] + (won ? " won but flagged" : " lost unflagged"));
    }
    o.check(winners == 1, tag + std::to_string(winners) + " winners");
    sim::SimReport again = run_bundled("double_spend", seed);
    o.check(again.text == r.text, tag + "not deterministic");
  }
  if (o.pass) o.detail = "one winner on every node, loser flagged, seeds 1-5";
  return o;
}

Outcome escrow() {
  Outcome o;
  std::size_t steps = 0;
  for (const auto& name : kBundled) {
    sim::SimReport r = run_bundled(name);
    for (const auto& s : r.steps) {
      ++steps;
      o.check(s.escrow == s.outstanding, name + " line " + std::to_string(s.line) + ": escrow " +
                                             std::to_string(s.escrow) + " vs " +
                                             std::to_string(s.outstanding));
    }
  }
  if (o.pass) o.detail = std::to_string(steps) + " steps across " + std::to_string(kBundled.size()) + " scenarios";
  return o;
}

Outcome tamper() {
  Outcome o;
  const std::string golden = slurp(source("tests/data/golden3.ledger"));
  const ledger::ChainParams params =
      ledger::parse_params(slurp(source("tests/data/golden3.ledger.params")));
  auto bytes = [](const std::string& s) {
    return ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
  };
  const audit::AuditReport base = audit::audit_ledger(bytes(golden), params);
  o.check(base.valid() && base.blocks == 3, "golden ledger does not audit as 3 valid blocks");

  Rng rng(8080);
  std::size_t caught = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t pos = rng.below(std::uint64_t{golden.size()});
    std::string t = golden;
    t[pos] = static_cast<char>(t[pos] ^ (1 + rng.below(std::uint64_t{255})));
    if (!audit::audit_ledger(bytes(t), params).valid()) {
      ++caught;
    } else {
      o.check(false, "flip at byte " + std::to_string(pos) + " passed audit");
    }
  }
  if (o.pass) o.detail = std::to_string(caught) + "/50 flips rejected";
  return o;
}

Outcome determinism() {
  Outcome o;
  for (const auto& name : kBundled) {
    std::string ledgers[2], reports[2];
    for (int i = 0; i < 2; ++i) {
      cli::RunManifest m;
      m.scenario = source("scenarios/" + name + ".tcs");
      m.ledger = scratch(name + "." + std::to_string(i) + ".ledger").string();
      m.report = scratch(name + "." + std::to_string(i) + ".report").string();
      std::ostringstream out, err;
      cli::cmd_run(m, out, err);
      ledgers[i] = slurp(m.ledger);
      reports[i] = slurp(m.report);
    }
    o.check(!ledgers[0].empty() && ledgers[0] == ledgers[1], name + ": ledgers differ");
    o.check(!reports[0].empty() && reports[0] == reports[1], name + ": reports differ");
  }
  if (o.pass) o.detail = "ledger and report byte-identical for all bundled scenarios";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "blind-signature homomorphism", homomorphism},
      {2, "worked toy vector", toy_vector},
      {3, "serialization sizes", sizes},
      {4, "DLP subgroup guard", dlp_guard},
      {5, "transfer chain", transfer_chain},
      {6, "double-spend exclusion", double_spend},
      {7, "escrow conservation", escrow},
      {8, "tamper evidence", tamper},
      {9, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %d %s: %s (%s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
