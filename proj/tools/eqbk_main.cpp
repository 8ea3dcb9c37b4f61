#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eqbk/presets.hpp"
#include "eqbk/runconfig.hpp"

namespace {

// "vmin:vmax:n"
eqbk::VGrid parse_grid(const std::string& spec) {
  double v_min, v_max;
  int n;
  char c1, c2;
  std::istringstream is(spec);
  if (!(is >> v_min >> c1 >> v_max >> c2 >> n) || c1 != ':' || c2 != ':')
    throw eqbk::ConfigError("grid", "expected vmin:vmax:n, got '" + spec + "'");
  if (!(v_min < v_max)) throw eqbk::ConfigError("grid", "v_min must be below v_max");
  if (n < 3) throw eqbk::ConfigError("grid", "n_points must be at least 3");
  return eqbk::VGrid(v_min, v_max, n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Equilibrium envelopes, weighted Bergman kernels and convergence "
      "verification for radial weights on the sphere"};

  std::string config_path, preset, out_dir, grid_spec, window_spec;
  std::vector<int> ks;
  std::vector<std::string> cmds;
  bool list_presets = false;

  app.add_option("--config", config_path, "JSON run configuration file");
  app.add_option("--preset", preset, "preset name (fs, bump, example_5_2, example_5_3)");
  app.add_option("--k", ks, "tensor power (repeatable)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--grid", grid_spec, "display grid as vmin:vmax:n");
  app.add_option("--window", window_spec,
                 "slope window lo:hi, or at_zero | at_infinity | none");
  app.add_option("--cmd", cmds,
                 "command: envelope, bergman, kernel, verify, examples (repeatable)");
  app.add_flag("--list-presets", list_presets, "print the preset catalog as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (list_presets) {
    std::cout << eqbk::catalog_json().dump(2) << "\n";
    return 0;
  }

  try {
    eqbk::RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot read config file " << config_path << "\n";
        return 2;
      }
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
      }
      cfg = eqbk::RunConfig::from_json(j);
    }
    if (!preset.empty()) cfg.preset_name = preset;
    if (!ks.empty()) cfg.ks = ks;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!grid_spec.empty()) cfg.grid = parse_grid(grid_spec);
    if (!window_spec.empty()) {
      if (window_spec == "at_zero" || window_spec == "at_infinity" ||
          window_spec == "none") {
        cfg.window_keyword = window_spec;
        cfg.window.reset();
      } else {
        double lo, hi;
        char c;
        std::istringstream is(window_spec);
        if (!(is >> lo >> c >> hi) || c != ':')
          throw eqbk::ConfigError("window", "expected lo:hi or a divisor keyword");
        cfg.window = eqbk::SlopeWindow{lo, hi};
      }
    }
    if (!cmds.empty()) cfg.commands = cmds;
    cfg.validate();

    const int status = eqbk::run(cfg);
    std::cout << "wrote artifacts to " << cfg.out_dir
              << (status == 0 ? " (all verdicts pass)" : " (some verdicts FAILED)")
              << "\n";
    return status;
  } catch (const eqbk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const eqbk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
