// Built-in experiment presets and JSON config loading.

#ifndef MSMW_SCENARIOS_H_
#define MSMW_SCENARIOS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msmw/model.h"
#include "msmw/policies.h"
#include "msmw/sim.h"

namespace msmw {

enum class ScenarioKind {
  kFig1Example,     // two-link worked example, deterministic arrivals
  kFig2LinkCount,   // N in {4..64}, delta = N+1
  kFig3DeltaSweep,  // N = 32, delta = N+k
  kFig4TwoTails,    // N = 16, delta = N+5, two-tails rates
  kFig5Regularity,  // N = 16, delta = N+5, shifted decreasing rates
  kFig6Robustness,  // both rate shapes of fig4/fig5
  kFig7GeneralLinks,
  kFig8GeneralDelta,
  kCustom,
};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kCustom;
  std::vector<double> sweep;          // empty: the preset's default sweep
  std::vector<PolicyKind> policies;   // empty: the preset's default pair
  Slot horizon_slots = 10000;
  int num_runs = 10;
  std::uint64_t base_seed = 1;
  GeometricParams geometry;           // fig7/fig8 only; num_links is swept
  double max_lambda = 0.25;           // fig7/fig8: lambda_i ~ U[0, max_lambda]
  std::vector<SimConfig> custom;      // kCustom only
};

std::string_view scenario_name(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario(std::string_view name);
std::string_view scenario_description(ScenarioKind kind);
std::vector<ScenarioKind> builtin_scenarios();

// Preset spec with the default sweep and policies filled in.
ScenarioSpec preset(ScenarioKind kind);

// One SimConfig per (sweep value, policy), sweep-major. Deterministic in its input.
// Presets use deterministic arrivals (A_i = lambda_i every slot).
std::vector<SimConfig> expand_scenario(const ScenarioSpec& spec);

// Rate vectors used by the collocated presets (1-based link index i).
std::vector<double> decreasing_rates(std::size_t n);                // 1/(N i)
std::vector<double> shifted_rates(std::size_t n, int k);            // 1/(N (i+k))
std::vector<double> two_tails_rates(std::size_t n, int k);          // first half 1/(N i), rest 1/(N (i+k))

// Reads a JSON config describing a custom network. One SimConfig per listed
// policy. Throws ConfigError with the offending field on bad input.
std::vector<SimConfig> load_config_file(const std::filesystem::path& path);
std::vector<SimConfig> parse_config_json(std::string_view text);

}  // namespace msmw

#endif  // MSMW_SCENARIOS_H_
