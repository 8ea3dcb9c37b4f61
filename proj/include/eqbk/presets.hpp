#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eqbk/envelope.hpp"
#include "eqbk/weight.hpp"

namespace eqbk {

struct Preset {
  std::string name;
  std::string description;
  Weight weight;
  SlopeWindow window;
};

/// Built-in presets:
///   fs            degree-1 weight, no bump (everything has a closed form)
///   bump          degree-1 weight dented by a mollifier bump
///   example_5_2   degree-2 weight, slope window [0,1]: contact set is the
///                 unit disc (sections vanishing at infinity)
///   example_5_3   degree-2 weight, slope window [1,2]: contact set is the
///                 complement of the unit disc (sections vanishing at zero)
const std::vector<Preset>& preset_catalog();

const Preset& find_preset(const std::string& name);  // throws ConfigError

nlohmann::json catalog_json();

}  // namespace eqbk
