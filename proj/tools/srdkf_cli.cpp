// srdkf: run SR-DKF network simulations and write CSV/JSON artifacts.
#include "srdkf/config.hpp"
#include "srdkf/netsim.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace srdkf;
using config::json;

namespace {

constexpr int kUsageError = 2;

const char* kScenarioHelp = R"(Scenario file (JSON, keys carry their unit; receivers are 1-based):
  name                 string                     default "custom"
  graph                {n_receivers, edges: [[i, j], ...]}   required
  duration_s           number                     required
  n_satellites         integer                    default 8
  dt_s                 number                     default 1
  attacks              [{victim, kind: "ramp", start_s, end_s, rate_nsps}
                        | {victim, kind: "meaconing", start_s, end_s, bias_us}]
  noise                {process_T, pseudorange, initial_T: {mean_lo_us, mean_hi_us, var_hi_us2, generator_hw_us}
                        process_Tdot, doppler, initial_Tdot: {mean_lo_nsps, mean_hi_nsps, var_hi_nsps2, generator_hw_nsps}
                        inflation (3), redraw_period_s (30)}
                       default: the bounds of the coordinated preset; generator_hw null = half the mean interval
  psi 0.3, gamma 6, levels 32, alert_limit_us 26.5, rng_seed 1
  filter               {measurement_model "ones"|"block", fusion "batch"|"sequential", edge_delay false,
                        max_generators 32, ellipse_directions 16, adaptive_r_floor true,
                        adaptive_residual "postfit"|"prefit"}
`srdkf config --preset NAME` prints a complete example.)";

struct RunArgs {
  std::string preset;
  std::string scenario;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int runs = 0;
  std::string estimators = "srdkf,pvdkf,akf";
  bool no_risk = false;
  bool all_timeseries = false;
};

std::vector<netsim::Estimator> parse_estimators(const std::string& list) {
  std::vector<netsim::Estimator> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto e = netsim::estimator_from_string(item);
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  if (out.empty()) throw netsim::ConfigError("--estimators: at least one estimator is required");
  return out;
}

netsim::Scenario preset_scenario(const std::string& name) {
  if (name == "coordinated") return netsim::preset_coordinated();
  if (name == "none") return netsim::preset_none();
  throw netsim::ConfigError("--preset: unknown preset '" + name + "'");
}

void write_json(const fs::path& file, const json& j) { config::write_file(file, j.dump(2) + "\n"); }

netsim::RunSummary write_single(const fs::path& dir, const netsim::Scenario& s, const netsim::RunOptions& opts) {
  const auto log = netsim::run_scenario(s, opts);
  std::ostringstream csv;
  config::write_timeseries(csv, log);
  config::write_file(dir / "timeseries.csv", csv.str());
  auto summary = netsim::summarize(log, s);
  write_json(dir / "summary.json", config::summary_to_json(log, s, summary));
  return summary;
}

void run_many(const fs::path& dir, const netsim::Scenario& s, int runs, const netsim::RunOptions& opts,
              bool all_timeseries) {
  netsim::MonteCarloResult mc;
  if (all_timeseries) {
    std::vector<netsim::RunSummary> per_run;
    for (int r = 0; r < runs; ++r) {
      netsim::Scenario run = s;
      run.rng_seed = s.rng_seed + static_cast<std::uint64_t>(r);
      const fs::path sub = dir / ("seed_" + std::to_string(run.rng_seed));
      fs::create_directories(sub);
      per_run.push_back(write_single(sub, run, opts));
    }
    mc = netsim::aggregate(s, std::move(per_run), opts.estimators);
  } else {
    mc = netsim::monte_carlo(s, runs, s.rng_seed, opts);
  }
  write_json(dir / "montecarlo.json", config::monte_carlo_to_json(mc, s));
}

void run_robustness(const fs::path& dir, const RunArgs& a, const netsim::RunOptions& opts) {
  const int runs = a.runs > 0 ? a.runs : 50;
  const std::uint64_t seed = a.seed_given ? a.seed : 1;
  json cells = json::array();
  for (double mag : netsim::robustness_magnitudes_s()) {
    for (int size : netsim::robustness_sizes()) {
      netsim::Scenario s = netsim::preset_robustness_cell(mag, size);
      s.rng_seed = seed;
      const double mag_us = config::to_unit(mag, 1e-6);
      char name[64];
      std::snprintf(name, sizeof name, "bias_%gus_size_%d", mag_us, size);
      const fs::path sub = dir / name;
      fs::create_directories(sub);
      write_json(sub / "resolved_config.json", config::scenario_to_json(s));
      const auto mc = netsim::monte_carlo(s, runs, seed, opts);
      write_json(sub / "montecarlo.json", config::monte_carlo_to_json(mc, s));
      json per_run = json::array();
      for (const auto& r : mc.per_run) per_run.push_back(r.receivers[0].mean_risk);
      cells.push_back({{"bias_us", mag_us},
                       {"size", size},
                       {"dir", name},
                       {"rx1_mean_risk", mc.mean_risk[0].mean},
                       {"rx1_per_run_mean_risk", per_run}});
    }
  }
  json mags = json::array(), sizes = json::array();
  for (double m : netsim::robustness_magnitudes_s()) mags.push_back(config::to_unit(m, 1e-6));
  for (int n : netsim::robustness_sizes()) sizes.push_back(n);
  write_json(dir / "robustness.json",
             {{"runs", runs}, {"seed_base", seed}, {"bias_us", mags}, {"sizes", sizes}, {"cells", cells}});
}

int run_command(const RunArgs& a) {
  if (a.preset.empty() == a.scenario.empty())
    throw netsim::ConfigError("run: exactly one of --preset and --scenario is required");
  if (a.runs < 0) throw netsim::ConfigError("--runs: must be positive");
  netsim::RunOptions opts;
  opts.estimators = parse_estimators(a.estimators);
  opts.compute_risk = !a.no_risk;
  const fs::path dir = a.out;
  fs::create_directories(dir);

  if (a.preset == "robustness") {
    run_robustness(dir, a, opts);
    std::cout << "wrote " << (dir / "robustness.json").string() << "\n";
    return 0;
  }
  netsim::Scenario s = a.preset.empty() ? config::load_scenario(a.scenario) : preset_scenario(a.preset);
  if (a.seed_given) s.rng_seed = a.seed;
  s.validate();
  write_json(dir / "resolved_config.json", config::scenario_to_json(s));
  const int runs = a.runs > 0 ? a.runs : 1;
  if (runs == 1) {
    write_single(dir, s, opts);
    std::cout << "wrote " << (dir / "timeseries.csv").string() << "\n";
  } else {
    run_many(dir, s, runs, opts, a.all_timeseries);
    std::cout << "wrote " << (dir / "montecarlo.json").string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-valued distributed Kalman filtering for GPS timing over a receiver network"};
  app.require_subcommand(1);
  app.footer(kScenarioHelp);

  RunArgs a;
  auto* run = app.add_subcommand("run", "Simulate a preset or a scenario file and write artifacts");
  run->add_option("--preset", a.preset, "coordinated | robustness | none");
  run->add_option("--scenario", a.scenario, "Scenario JSON file");
  run->add_option("--out", a.out, "Output directory")->required();
  run->add_option("--seed", a.seed, "RNG seed (first seed of a Monte-Carlo batch); default from the scenario");
  run->add_option("--runs", a.runs, "Monte-Carlo runs (default 1, robustness 50)")->check(CLI::PositiveNumber);
  run->add_option("--estimators", a.estimators, "Comma-separated subset of srdkf,pvdkf,akf")
      ->capture_default_str();
  run->add_flag("--no-risk", a.no_risk, "Skip the timing-risk computation");
  run->add_flag("--all-timeseries", a.all_timeseries, "With --runs > 1, also write one run directory per seed");

  std::string show_preset, show_scenario;
  auto* show = app.add_subcommand("config", "Print the resolved scenario JSON of a preset or file");
  show->add_option("--preset", show_preset, "coordinated | none");
  show->add_option("--scenario", show_scenario, "Scenario JSON file");

  try {
    app.parse(argc, argv);
    a.seed_given = run->count("--seed") > 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*run) return run_command(a);
    if (show_preset.empty() == show_scenario.empty())
      throw netsim::ConfigError("config: exactly one of --preset and --scenario is required");
    const auto s = show_preset.empty() ? config::load_scenario(show_scenario) : preset_scenario(show_preset);
    std::cout << config::scenario_to_json(s).dump(2) << "\n";
    return 0;
  } catch (const netsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
