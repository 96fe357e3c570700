#include "tcash/profile.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "tcash/errors.hpp"

namespace tcash {

const Profile& profile_by_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == kToyProfile.name) return kToyProfile;
  if (lower == kStandardProfile.name) return kStandardProfile;
  throw Error(Errc::kProfile, "unknown profile '" + std::string(name) + "'");
}

}  // namespace tcash
