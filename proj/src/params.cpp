#include "tcash/params.hpp"

#include <sstream>
#include <vector>

#include "tcash/errors.hpp"

namespace tcash::ledger {

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

Nat nat_from_hex(const std::string& hex) {
  Nat v;
  if (hex.empty() || v.set_str(hex, 16) != 0) throw Error(Errc::kFormat, "bad hex number");
  return v;
}

}  // namespace

std::string format_params(const ChainParams& p) {
  std::ostringstream out;
  out << "tcash-params 1\n";
  out << "profile " << p.profile << "\n";
  out << "difficulty " << p.difficulty << "\n";
  for (const auto& [id, name] : p.bank_names) out << "bank " << to_hex(id) << " " << name << "\n";
  for (const auto& [id, keys] : p.banks) {
    for (const auto& [val, pk] : keys) {
      out << "key " << to_hex(id) << " " << val << " " << pk.e.get_str(16) << " "
          << pk.n.get_str(16) << "\n";
    }
  }
  return out.str();
}

ChainParams parse_params(std::string_view text) {
  ChainParams p;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  bool saw_difficulty = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto words = split_words(line);
    if (words.empty()) continue;
    try {
      if (!saw_header) {
        if (words.size() != 2 || words[0] != "tcash-params" || words[1] != "1") {
          throw Error(Errc::kFormat, "missing 'tcash-params 1' header");
        }
        saw_header = true;
      } else if (words[0] == "profile" && words.size() == 2) {
        p.profile = words[1];
      } else if (words[0] == "difficulty" && words.size() == 2) {
        p.difficulty = static_cast<std::uint32_t>(std::stoul(words[1]));
        saw_difficulty = true;
      } else if (words[0] == "bank" && words.size() == 3) {
        p.bank_names[digest_from_hex(words[1])] = words[2];
      } else if (words[0] == "key" && words.size() == 5) {
        bs::PublicKey pk{nat_from_hex(words[3]), nat_from_hex(words[4])};
        p.banks[digest_from_hex(words[1])][std::stoull(words[2])] = pk;
      } else {
        throw Error(Errc::kFormat, "unrecognised entry '" + words[0] + "'");
      }
    } catch (const Error& e) {
      throw Error(Errc::kFormat, "params line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(Errc::kFormat, "params line " + std::to_string(line_no) + ": bad number");
    }
  }
  if (!saw_header) throw Error(Errc::kFormat, "empty params file");
  if (!saw_difficulty) throw Error(Errc::kFormat, "params file lacks a difficulty");
  return p;
}

}  // namespace tcash::ledger
