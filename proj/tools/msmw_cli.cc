// msmw: experiment runner and bounds calculator.
//
//   msmw list-scenarios
//   msmw simulate <scenario|config.json> [--seed S] [--runs R] [--slots T]
//                 [--out F] [--trace] [--threads J]
//   msmw bounds <scenario|config.json> [--slack-const H]
//
// Without --out, results go to $MSMW_OUTPUT_DIR/<name>.csv (or ./<name>.csv).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "msmw/bounds.h"
#include "msmw/report.h"
#include "msmw/scenarios.h"

namespace fs = std::filesystem;

namespace {

struct Target {
  std::string name;
  std::vector<msmw::SimConfig> configs;
};

// Preset names take precedence over file paths.
Target resolve(const std::string& what, const std::optional<std::uint64_t>& seed,
               const std::optional<int>& runs, const std::optional<msmw::Slot>& slots) {
  Target t;
  if (auto kind = msmw::parse_scenario(what); kind && *kind != msmw::ScenarioKind::kCustom) {
    msmw::ScenarioSpec spec = msmw::preset(*kind);
    if (seed) spec.base_seed = *seed;
    if (runs) spec.num_runs = *runs;
    if (slots) spec.horizon_slots = *slots;
    t.name = what;
    t.configs = msmw::expand_scenario(spec);
    return t;
  }
  if (!fs::exists(what))
    throw msmw::ConfigError("'" + what + "' is neither a scenario name nor a config file");
  t.name = fs::path(what).stem().string();
  t.configs = msmw::load_config_file(what);
  for (auto& c : t.configs) {
    if (seed) c.base_seed = *seed;
    if (runs) c.num_runs = *runs;
    if (slots) c.horizon_slots = *slots;
  }
  return t;
}

fs::path default_output(const std::string& name) {
  const char* dir = std::getenv("MSMW_OUTPUT_DIR");
  return fs::path(dir && *dir ? dir : ".") / (name + ".csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-constrained link scheduling simulator"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-scenarios", "List the built-in scenario presets");

  auto* simulate = app.add_subcommand("simulate", "Run a scenario preset or a JSON config");
  std::string sim_target;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<msmw::Slot> slots;
  std::string out_path;
  bool trace = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  simulate->add_option("target", sim_target, "Scenario name or config file")->required();
  simulate->add_option("--seed", seed, "Base seed; run k uses seed + k");
  simulate->add_option("--runs", runs, "Runs per configuration")->check(CLI::PositiveNumber);
  simulate->add_option("--slots", slots, "Slots per run")->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_path, "Output CSV path");
  simulate->add_flag("--trace", trace, "Write per-slot traces of run 0 next to the CSV");
  simulate->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* bounds = app.add_subcommand("bounds", "Print analytic bounds for a scenario or config");
  std::string bounds_target;
  double h = 1.0;
  bounds->add_option("target", bounds_target, "Scenario name or config file")->required();
  bounds->add_option("--slack-const", h, "Constant h of the per-slot backlog bound B")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (msmw::ScenarioKind k : msmw::builtin_scenarios())
        std::cout << msmw::scenario_name(k) << "  " << msmw::scenario_description(k) << '\n';
      return 0;
    }

    if (*simulate) {
      const Target t = resolve(sim_target, seed, runs, slots);
      const fs::path out = out_path.empty() ? default_output(t.name) : fs::path(out_path);
      msmw::RunOptions options;
      options.threads = threads;
      if (trace) options.trace_dir = out.parent_path() / (out.stem().string() + "_traces");
      return msmw::run_and_emit(t.configs, out, options, std::cout);
    }

    if (*bounds) {
      const Target t = resolve(bounds_target, std::nullopt, std::nullopt, std::nullopt);
      std::set<std::pair<std::string, double>> seen;
      const bool many = t.configs.size() > 1;
      for (const auto& c : t.configs) {
        if (!seen.emplace(c.label, c.sweep_value).second) continue;
        if (many && seen.size() > 1) std::cout << '\n';
        if (many) std::cout << "[" << c.label << " sweep=" << msmw::format_real(c.sweep_value) << "]\n";
        const auto var = msmw::arrival_variances(c.network.links, c.arrivals);
        msmw::write_bound_report(std::cout, msmw::compute_bounds(c.network.links, var, h));
      }
      return 0;
    }
  } catch (const msmw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
