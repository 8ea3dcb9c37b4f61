#include "eqbk/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "eqbk/presets.hpp"
#include "eqbk/report.hpp"

namespace eqbk {

namespace {

const std::set<std::string> kCommands = {"envelope", "bergman", "kernel", "verify",
                                         "examples"};

double get_number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

int get_int(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  RunConfig cfg;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key != "preset" && key != "weight" && key != "window" && key != "grid" &&
        key != "ks" && key != "outputs" && key != "commands")
      throw ConfigError(key, "unknown field");
  }
  if (j.contains("preset")) {
    if (j["preset"].is_string()) {
      cfg.preset_name = j["preset"].get<std::string>();
    } else if (j["preset"].is_object()) {
      // inline weight JSON allowed directly under "preset"
      try {
        cfg.weight = Weight::from_json(j["preset"]);
      } catch (const Error& e) {
        throw ConfigError("preset", e.what());
      }
    } else {
      throw ConfigError("preset", "expected a preset name or a weight object");
    }
  }
  if (j.contains("weight")) {
    try {
      cfg.weight = Weight::from_json(j["weight"]);
    } catch (const Error& e) {
      throw ConfigError("weight", e.what());
    }
  }
  if (j.contains("window")) {
    const auto& w = j["window"];
    if (w.is_string()) {
      cfg.window_keyword = w.get<std::string>();
      if (cfg.window_keyword != "none" && cfg.window_keyword != "at_zero" &&
          cfg.window_keyword != "at_infinity")
        throw ConfigError("window", "keyword must be none, at_zero or at_infinity");
    } else if (w.is_array() && w.size() == 2) {
      cfg.window = SlopeWindow{get_number(w[0], "window[0]"), get_number(w[1], "window[1]")};
    } else {
      throw ConfigError("window", "expected [lo, hi] or a divisor keyword");
    }
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (!g.is_object()) throw ConfigError("grid", "expected an object");
    if (!g.contains("v_min") || !g.contains("v_max") || !g.contains("n_points"))
      throw ConfigError("grid", "needs v_min, v_max, n_points");
    const double v_min = get_number(g["v_min"], "grid.v_min");
    const double v_max = get_number(g["v_max"], "grid.v_max");
    const int n = get_int(g["n_points"], "grid.n_points");
    if (!(v_min < v_max)) throw ConfigError("grid.v_min", "must be below v_max");
    if (n < 3) throw ConfigError("grid.n_points", "must be at least 3");
    cfg.grid = VGrid(v_min, v_max, n);
  }
  if (j.contains("ks")) {
    if (!j["ks"].is_array() || j["ks"].empty())
      throw ConfigError("ks", "expected a non-empty integer array");
    cfg.ks.clear();
    for (size_t i = 0; i < j["ks"].size(); ++i) {
      const int k = get_int(j["ks"][i], "ks[" + std::to_string(i) + "]");
      if (k < 1) throw ConfigError("ks[" + std::to_string(i) + "]", "must be >= 1");
      cfg.ks.push_back(k);
    }
  }
  if (j.contains("outputs")) {
    if (!j["outputs"].is_string()) throw ConfigError("outputs", "expected a string");
    cfg.out_dir = j["outputs"].get<std::string>();
  }
  if (j.contains("commands")) {
    if (!j["commands"].is_array() || j["commands"].empty())
      throw ConfigError("commands", "expected a non-empty string array");
    cfg.commands.clear();
    for (const auto& c : j["commands"]) {
      if (!c.is_string()) throw ConfigError("commands", "entries must be strings");
      cfg.commands.push_back(c.get<std::string>());
    }
  }
  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  if (preset_name.empty() && !weight)
    throw ConfigError("preset", "need a preset name or an inline weight");
  if (!preset_name.empty() && !weight) find_preset(preset_name);  // throws if unknown
  for (const auto& c : commands)
    if (!kCommands.count(c))
      throw ConfigError("commands", "unknown command '" + c + "'");
  for (int k : ks)
    if (k < 1) throw ConfigError("ks", "k values must be >= 1");
  const Weight w = resolve_weight();
  const SlopeWindow win = resolve_window();
  try {
    win.validate();
  } catch (const InvalidWindowError& e) {
    throw ConfigError("window", e.what());
  }
  if (!(win.lo >= 0.0 && win.hi <= w.degree_m()))
    throw ConfigError("window", "slope window must lie inside [0, degree_m]");
}

Weight RunConfig::resolve_weight() const {
  if (weight) return *weight;
  return find_preset(preset_name).weight;
}

SlopeWindow RunConfig::resolve_window() const {
  if (window) return *window;
  const int m = resolve_weight().degree_m();
  if (window_keyword == "at_zero") return SlopeWindow{1.0, static_cast<double>(m)};
  if (window_keyword == "at_infinity") return SlopeWindow{0.0, static_cast<double>(m - 1)};
  if (window_keyword == "none") return SlopeWindow{0.0, static_cast<double>(m)};
  if (!preset_name.empty() && !weight) return find_preset(preset_name).window;
  return SlopeWindow{0.0, static_cast<double>(m)};
}

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

void write_report(const fs::path& dir, const ConvergenceReport& rep) {
  const std::string stem = "verify_" + lower(to_string(rep.id));
  write_file(dir / (stem + ".csv"), rep.csv());
  write_file(dir / (stem + ".json"), rep.to_json().dump(2) + "\n");
}

std::string envelope_csv(const VerifyContext& ctx) {
  const EquilibriumMeasure em = equilibrium_measure(ctx.env);
  std::string out = "v,u,u_e,contact,slope,ma_density\n";
  for (int i = 0; i < ctx.grid.n_points(); ++i) {
    out += format_double(ctx.grid.node(i));
    out += ',';
    out += format_double(ctx.u.values[i]);
    out += ',';
    out += format_double(ctx.env.u_e.values[i]);
    out += ',';
    out += ctx.env.contact[i] ? '1' : '0';
    out += ',';
    out += format_double(ctx.env.slope.values[i]);
    out += ',';
    out += format_double(em.density.values[i]);
    out += '\n';
  }
  return out;
}

std::string kernel_eval_csv(const VerifyContext& ctx, const KernelEval& ev) {
  const GridFn measure = bergman_measure(ev);
  std::string out = "v,log_B,bergman_metric,bergman_ma_density\n";
  for (int i = 0; i < ctx.grid.n_points(); ++i) {
    out += format_double(ctx.grid.node(i));
    out += ',';
    out += format_double(ev.log_B.values[i]);
    out += ',';
    out += format_double(ev.metric.values[i]);
    out += ',';
    out += format_double(measure.values[i]);
    out += '\n';
  }
  return out;
}

std::string offdiag_csv(VerifyContext& ctx, int k) {
  const LogNorms& norms = ctx.norms_for(k);
  const SectionSpace sp = ctx.space(k);
  const PolarPoint x{0.0, 0.0};
  std::string out = "v,k2_same_phase,k2_opposite_phase\n";
  for (int i = 0; i < ctx.grid.n_points(); ++i) {
    const double v = ctx.grid.node(i);
    out += format_double(v);
    out += ',';
    out += format_double(kernel_offdiag_sq(sp, norms, x, PolarPoint{v, 0.0}));
    out += ',';
    out += format_double(kernel_offdiag_sq(sp, norms, x, PolarPoint{v, M_PI}));
    out += '\n';
  }
  return out;
}

// Probe selection for the decay report: local gap maxima with gap >= 0.05.
std::vector<double> pick_decay_probes(const VerifyContext& ctx) {
  std::vector<double> probes;
  double best = 0.0;
  int best_i = -1;
  for (int i = 0; i < ctx.grid.n_points(); ++i) {
    const double d = ctx.u.values[i] - ctx.env.u_e.values[i];
    if (d > best) {
      best = d;
      best_i = i;
    }
  }
  if (best_i >= 0 && best >= 0.1) probes.push_back(ctx.grid.node(best_i));
  return probes;
}

// Probe for the expansion report: the midpoint of the longest contact run,
// far from free boundaries where the kernel is still in its boundary layer.
std::optional<double> pick_expansion_probe(const VerifyContext& ctx) {
  const int n = ctx.grid.n_points();
  int best_len = 0, best_lo = -1;
  for (int i = 0; i < n;) {
    if (!ctx.env.contact[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && ctx.env.contact[j + 1]) ++j;
    if (j - i + 1 > best_len) {
      best_len = j - i + 1;
      best_lo = i;
    }
    i = j + 1;
  }
  if (best_lo < 0) return std::nullopt;
  // midpoint of the run; if the curvature vanishes there, scan its middle
  // third for the strongest curvature
  const int mid = best_lo + best_len / 2;
  if (ctx.curv[mid] > 1e-6) return ctx.grid.node(mid);
  int best_i = -1;
  double best_c = 1e-6;
  for (int i = best_lo + best_len / 3; i <= best_lo + 2 * best_len / 3; ++i) {
    if (ctx.curv[i] > best_c) {
      best_c = ctx.curv[i];
      best_i = i;
    }
  }
  if (best_i < 0) return std::nullopt;
  return ctx.grid.node(best_i);
}

std::vector<int> ks_at_least(const std::vector<int>& ks, int lo) {
  std::vector<int> out;
  for (int k : ks)
    if (k >= lo) out.push_back(k);
  if (out.empty()) out = ks;
  return out;
}

}  // namespace

int run(const RunConfig& config) {
  config.validate();
  const Weight w = config.resolve_weight();
  const SlopeWindow window = config.resolve_window();
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);

  VerifyContext ctx = VerifyContext::make(w, window, config.grid);
  bool all_pass = true;

  for (const std::string& cmd : config.commands) {
    if (cmd == "envelope") {
      write_file(dir / "envelope.csv", envelope_csv(ctx));
    } else if (cmd == "bergman") {
      for (int k : config.ks)
        write_file(dir / ("bergman_k" + std::to_string(k) + ".csv"),
                   kernel_eval_csv(ctx, ctx.eval_for(k)));
    } else if (cmd == "kernel") {
      const int k = *std::min_element(config.ks.begin(), config.ks.end());
      write_file(dir / ("kernel_k" + std::to_string(k) + ".csv"), offdiag_csv(ctx, k));
    } else if (cmd == "examples") {
      std::vector<DivisorExample> which;
      if (config.preset_name == "example_5_2")
        which = {DivisorExample::BallAtOrigin};
      else if (config.preset_name == "example_5_3")
        which = {DivisorExample::ComplementOfBall};
      else
        which = {DivisorExample::BallAtOrigin, DivisorExample::ComplementOfBall};
      for (auto ex : which) {
        const ConvergenceReport rep = divisor_example_report(ex);
        const std::string tag =
            (ex == DivisorExample::BallAtOrigin) ? "example_5_2" : "example_5_3";
        write_file(dir / ("examples_" + tag + ".csv"), rep.csv());
        write_file(dir / ("examples_" + tag + ".json"), rep.to_json().dump(2) + "\n");
        all_pass = all_pass && rep.pass;
      }
    } else if (cmd == "verify") {
      std::vector<ConvergenceReport> reports;
      const bool divisor_preset =
          config.preset_name == "example_5_2" || config.preset_name == "example_5_3";
      if (!divisor_preset) {
        reports.push_back(l1_report(ctx, config.ks));
        reports.push_back(uniform_report(ctx, ks_at_least(config.ks, 50)));
        reports.push_back(morse_report(ctx, config.ks));
        reports.push_back(offdiag_report(ctx, 300, test_profile(ctx.grid, 0.0, 3.0),
                                         test_profile(ctx.grid, 0.0, 3.0)));
        if (auto v_star = pick_expansion_probe(ctx))
          reports.push_back(expansion_probe(ctx, *v_star, config.ks));
        reports.push_back(eqmeasure_report(ctx));
        const auto probes = pick_decay_probes(ctx);
        if (!probes.empty())
          reports.push_back(decay_report(ctx, probes, {50, 100, 200, 400}));
      } else if (config.preset_name == "example_5_2") {
        reports.push_back(divisor_example_report(DivisorExample::BallAtOrigin));
        reports.push_back(regularity_report(w, window, {4096, 8192, 16384}));
        reports.push_back(eqmeasure_report(ctx));
        reports.push_back(decay_report(ctx, {2.0}, {50, 100, 200, 400}));
        reports.push_back(l1_report(ctx, config.ks));
        reports.push_back(offdiag_report(ctx, 300, test_profile(ctx.grid, 4.0, 1.5),
                                         test_profile(ctx.grid, 4.0, 1.5)));
        reports.push_back(lelong_report(config.ks));
      } else {
        reports.push_back(divisor_example_report(DivisorExample::ComplementOfBall));
        reports.push_back(regularity_report(w, window, {4096, 8192, 16384}));
        reports.push_back(eqmeasure_report(ctx));
        reports.push_back(lelong_report(config.ks));
      }
      for (const auto& rep : reports) {
        write_report(dir, rep);
        all_pass = all_pass && rep.pass;
      }
    }
  }
  return all_pass ? 0 : 1;
}

}  // namespace eqbk
