#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eqbk/envelope.hpp"
#include "eqbk/verify.hpp"
#include "eqbk/weight.hpp"

namespace eqbk {

/// Validated run description for the command-line tool.
struct RunConfig {
  std::string preset_name;         // empty when an inline weight is given
  std::optional<Weight> weight;    // inline weight (overrides preset)
  std::string window_keyword;      // "none" | "at_zero" | "at_infinity" | ""
  std::optional<SlopeWindow> window;  // explicit window (overrides keyword)
  VGrid grid = default_grid();
  std::vector<int> ks = default_ks();
  std::string out_dir = "out";
  std::vector<std::string> commands = {"verify"};

  /// Throws ConfigError with a field path on any invalid entry.
  static RunConfig from_json(const nlohmann::json& j);
  void validate() const;

  Weight resolve_weight() const;
  SlopeWindow resolve_window() const;
};

/// Executes the requested commands, writing one CSV per computation and one
/// JSON summary per verify theorem under out_dir.
///
/// Returns 0 when all requested verdicts pass, 1 when any verdict fails.
/// (Config errors are reported by throwing ConfigError before any work.)
int run(const RunConfig& config);

}  // namespace eqbk
