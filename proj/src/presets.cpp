#include "eqbk/presets.hpp"

#include <nlohmann/json.hpp>

namespace eqbk {

const std::vector<Preset>& preset_catalog() {
  static const std::vector<Preset> catalog = {
      {"fs",
       "degree-1 weight without bump; the Bergman function is constant k+1 and "
       "every report row has a closed form",
       Weight(1), SlopeWindow{0.0, 1.0}},
      {"bump",
       "degree-1 weight dented by a smooth bump (amplitude -1.5, center 0, "
       "halfwidth 2); the contact set has a nonempty complement",
       Weight(1, Bump{-1.5, 0.0, 2.0}), SlopeWindow{0.0, 1.0}},
      {"example_5_2",
       "degree-2 weight with slope window [0,1] (sections vanishing at "
       "infinity); the contact set is the unit disc",
       Weight(2), SlopeWindow{0.0, 1.0}},
      {"example_5_3",
       "degree-2 weight with slope window [1,2] (sections vanishing at zero); "
       "the contact set is the complement of the unit disc",
       Weight(2), SlopeWindow{1.0, 2.0}},
  };
  return catalog;
}

const Preset& find_preset(const std::string& name) {
  for (const Preset& p : preset_catalog())
    if (p.name == name) return p;
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

nlohmann::json catalog_json() {
  nlohmann::json out = nlohmann::json::array();
  for (const Preset& p : preset_catalog()) {
    out.push_back({{"name", p.name},
                   {"description", p.description},
                   {"weight", p.weight.to_json()},
                   {"window", {p.window.lo, p.window.hi}}});
  }
  return out;
}

}  // namespace eqbk
