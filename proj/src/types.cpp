#include "ballotlens/types.hpp"

#include <algorithm>
#include <cctype>

#include "ballotlens/errors.hpp"

namespace ballotlens {

std::string to_string(Chamber c) { return c == Chamber::Senate ? "Senate" : "House"; }

Chamber parse_chamber(const std::string& s) {
  std::string low = s;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (low == "senate" || low == "sen" || low == "us senate") return Chamber::Senate;
  if (low == "house" || low == "us house") return Chamber::House;
  throw SchemaError("unknown chamber '" + s + "'");
}

std::string RaceKey::str() const {
  return std::to_string(year) + "-" + (chamber == Chamber::Senate ? "S" : "H") + "-" + state + "-" +
         std::to_string(district);
}

}  // namespace ballotlens
