#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "tcash/audit.hpp"
#include "tcash/blindsig.hpp"
#include "tcash/bytes.hpp"
#include "tcash/errors.hpp"
#include "tcash/numtheory.hpp"
#include "tcash/params.hpp"
#include "tcash/profile.hpp"
#include "tcash/scenario.hpp"

namespace py = pybind11;

// Python int <-> mpz_class through base-16 text.
namespace pybind11::detail {
template <>
struct type_caster<mpz_class> {
  PYBIND11_TYPE_CASTER(mpz_class, const_name("int"));

  bool load(handle src, bool) {
    if (!PyLong_Check(src.ptr())) return false;
    object hex = reinterpret_steal<object>(PyNumber_ToBase(src.ptr(), 16));
    if (!hex) {
      PyErr_Clear();
      return false;
    }
    std::string s = hex.cast<std::string>();
    bool neg = !s.empty() && s[0] == '-';
    std::string digits = s.substr(neg ? 3 : 2);
    value.set_str(digits, 16);
    if (neg) value = -value;
    return true;
  }

  static handle cast(const mpz_class& v, return_value_policy, handle) {
    std::string s = v.get_str(16);
    return PyLong_FromString(s.c_str(), nullptr, 16);
  }
};
}  // namespace pybind11::detail

namespace {

using namespace tcash;

py::bytes to_py(ByteView b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

ByteView view_of(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

py::dict run_scenario(const std::string& text, std::uint64_t seed, std::uint32_t difficulty,
                      unsigned confirm_depth, std::size_t nodes, const std::string& profile) {
  sim::SimConfig cfg;
  cfg.seed = seed;
  cfg.difficulty = difficulty;
  cfg.confirm_depth = confirm_depth;
  cfg.nodes = nodes;
  cfg.profile = &profile_by_name(profile);
  sim::SimReport r;
  {
    py::gil_scoped_release release;
    r = sim::run(cfg, sim::parse_scenario(text));
  }
  py::dict d;
  d["report"] = r.text;
  d["ledger"] = to_py(r.ledger);
  d["params"] = r.params;
  d["assertion_failures"] = r.assertion_failures;
  d["escrow_violations"] = r.escrow_violations;
  d["converged"] = r.converged;
  d["single_spend_ok"] = r.single_spend_ok;
  return d;
}

py::dict audit_bytes(const std::string& ledger, const std::string& params_text) {
  ledger::ChainParams params = ledger::parse_params(params_text);
  audit::AuditReport r = audit::audit_ledger(view_of(ledger), params);
  py::list coins;
  for (const auto& c : r.coins) {
    py::dict coin;
    coin["sn"] = to_hex(c.coin.sn);
    coin["val"] = c.coin.val;
    coin["hops"] = c.hops.size();
    coins.append(coin);
  }
  py::dict d;
  d["valid"] = r.valid();
  d["blocks"] = r.blocks;
  d["instances"] = r.instances;
  d["coins"] = coins;
  d["text"] = audit::format_report(r);
  if (r.violation) {
    d["violation_block"] = r.violation->block;
    d["violation_rule"] = r.violation->rule;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transferable e-cash core";

  py::register_exception<Error>(m, "TcashError", PyExc_ValueError);

  m.def("mod_exp", &nt::mod_exp, py::arg("base"), py::arg("exp"), py::arg("modulus"));
  m.def("mod_inverse", &nt::mod_inverse, py::arg("a"), py::arg("modulus"));
  m.def("is_probable_prime", &nt::is_probable_prime, py::arg("n"), py::arg("rounds") = 40);

  py::class_<nt::DlpGroup>(m, "DlpGroup")
      .def(py::init([](const Nat& p, const Nat& q, const Nat& alpha) {
             return nt::DlpGroup{p, q, alpha};
           }),
           py::arg("p"), py::arg("q"), py::arg("alpha"))
      .def_readonly("p", &nt::DlpGroup::p)
      .def_readonly("q", &nt::DlpGroup::q)
      .def_readonly("alpha", &nt::DlpGroup::alpha);
  m.def("gen_dlp_group",
        [](std::size_t p_bits, std::size_t q_bits, std::uint64_t seed) {
          return nt::gen_dlp_group(p_bits, q_bits, seed);
        },
        py::arg("p_bits"), py::arg("q_bits"), py::arg("seed"));
  m.def("is_valid_group",
        [](const nt::DlpGroup& g, std::size_t p_bits, std::size_t q_bits) {
          return nt::is_valid_group(g, p_bits, q_bits);
        },
        py::arg("group"), py::arg("p_bits") = 0, py::arg("q_bits") = 0);
  m.def("verify_dlp",
        py::overload_cast<const Nat&, const Nat&, const Nat&, const Nat&>(&nt::verify_dlp),
        py::arg("p"), py::arg("alpha"), py::arg("beta"), py::arg("x"));

  py::class_<bs::PublicKey>(m, "PublicKey")
      .def_readonly("e", &bs::PublicKey::e)
      .def_readonly("n", &bs::PublicKey::n);
  py::class_<bs::PrivateKey>(m, "PrivateKey")
      .def_readonly("d", &bs::PrivateKey::d)
      .def_readonly("n", &bs::PrivateKey::n);
  py::class_<bs::KeyPair>(m, "KeyPair")
      .def_readonly("pub", &bs::KeyPair::pub)
      .def_readonly("priv", &bs::KeyPair::priv);
  m.def("keygen",
        [](std::size_t bits, std::uint64_t seed, unsigned long e) {
          py::gil_scoped_release release;
          return bs::keygen(bits, seed, e);
        },
        py::arg("bits"), py::arg("seed"), py::arg("e") = 65537);
  m.def("keypair_from_factors", &bs::keypair_from_factors, py::arg("p"), py::arg("q"),
        py::arg("e"));
  m.def("blind",
        [](const Nat& msg, const Nat& r, const bs::PublicKey& pk) {
          return bs::blind(msg, bs::BlindingFactor(r, pk.n), pk);
        },
        py::arg("m"), py::arg("r"), py::arg("pub"));
  m.def("sign", &bs::sign, py::arg("m"), py::arg("priv"));
  m.def("unblind",
        [](const Nat& s, const Nat& r, const Nat& n) {
          return bs::unblind(s, bs::BlindingFactor(r, n), n);
        },
        py::arg("s"), py::arg("r"), py::arg("n"));
  m.def("verify", &bs::verify, py::arg("s"), py::arg("m"), py::arg("pub"));

  m.def("sha256", [](const py::bytes& data) { return to_py(sha256(view_of(data))); },
        py::arg("data"));

  m.def("run_scenario", &run_scenario, py::arg("text"), py::arg("seed") = 1,
        py::arg("difficulty") = 12, py::arg("confirm_depth") = 1, py::arg("nodes") = 3,
        py::arg("profile") = "toy");
  m.def("audit", &audit_bytes, py::arg("ledger"), py::arg("params"));
}
