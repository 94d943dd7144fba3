#include "msmw/scenarios.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace msmw {

namespace {

struct PresetInfo {
  ScenarioKind kind;
  std::string_view name;
  std::string_view description;
};

constexpr PresetInfo kPresets[] = {
    {ScenarioKind::kFig1Example, "fig1_example",
     "2 collocated links, work rates (1/2, 1/8), deltas (2, 4), deterministic arrivals"},
    {ScenarioKind::kFig2LinkCount, "fig2_link_count",
     "collocated, N in {4,8,16,32,64}, delta = N+1, lambda_i = 1/(N i); MSMW vs RTO"},
    {ScenarioKind::kFig3DeltaSweep, "fig3_delta_sweep",
     "collocated, N = 32, delta = N+k for k = 1..5, lambda_i = 1/(N i); MSMW vs RTO"},
    {ScenarioKind::kFig4TwoTails, "fig4_two_tails",
     "collocated, N = 16, delta = 21, two-tails rates, k = 1..20; MSMW vs RTO"},
    {ScenarioKind::kFig5Regularity, "fig5_regularity",
     "collocated, N = 16, delta = 21, lambda_i = 1/(N (i+k)), k = 1..20; MSMW vs RTO"},
    {ScenarioKind::kFig6Robustness, "fig6_robustness",
     "fig5 and fig4 rate shapes side by side, k = 1..20; MSMW vs RTO"},
    {ScenarioKind::kFig7GeneralLinks, "fig7_general_links",
     "geometric network, 40 nodes, 100 m square, radius 20 m, delta = 10, 20..200 links; "
     "MSMW vs greedy max-weight"},
    {ScenarioKind::kFig8GeneralDelta, "fig8_general_delta",
     "geometric network, 160 links, delta = 5..15; MSMW vs greedy max-weight"},
    {ScenarioKind::kCustom, "custom", "network read from a JSON config file"},
};

std::vector<double> range(int lo, int hi, int step = 1) {
  std::vector<double> out;
  for (int v = lo; v <= hi; v += step) out.push_back(v);
  return out;
}

std::vector<LinkSpec> uniform_links(const std::vector<double>& lambdas, int delta, double rate,
                                    double channel) {
  std::vector<LinkSpec> links;
  for (double lam : lambdas) links.push_back(LinkSpec{lam, rate, channel, delta});
  return links;
}

SimConfig base_config(const ScenarioSpec& spec, std::string label, double sweep_value,
                      NetworkSpec network, PolicyKind policy) {
  SimConfig c;
  c.label = std::move(label);
  c.sweep_value = sweep_value;
  c.network = std::move(network);
  c.policy = policy;
  c.horizon_slots = spec.horizon_slots;
  c.num_runs = spec.num_runs;
  c.base_seed = spec.base_seed;
  return c;
}

NetworkSpec collocated(std::vector<LinkSpec> links) {
  NetworkSpec net;
  net.graph = ConflictGraph::collocated(links.size());
  net.links = std::move(links);
  return net;
}

// The geometric network and its rate vector depend only on the base seed and
// the sweep point, so every policy sees the same instance.
NetworkSpec geometric(const ScenarioSpec& spec, std::size_t num_links, int delta,
                      std::uint64_t salt) {
  GeometricParams g = spec.geometry;
  g.num_links = num_links;
  Rng rng(spec.base_seed * 0x9E3779B97F4A7C15ULL + salt);
  GeometricNetwork geo = build_geometric_network(g, rng);
  NetworkSpec net;
  net.graph = std::move(geo.graph);
  for (std::size_t i = 0; i < num_links; ++i)
    net.links.push_back(LinkSpec{unit_uniform(rng) * spec.max_lambda, 2.0, 0.5, delta});
  return net;
}

}  // namespace

std::string_view scenario_name(ScenarioKind kind) {
  for (const auto& p : kPresets)
    if (p.kind == kind) return p.name;
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario(std::string_view name) {
  for (const auto& p : kPresets)
    if (p.name == name) return p.kind;
  return std::nullopt;
}

std::string_view scenario_description(ScenarioKind kind) {
  for (const auto& p : kPresets)
    if (p.kind == kind) return p.description;
  return "";
}

std::vector<ScenarioKind> builtin_scenarios() {
  std::vector<ScenarioKind> out;
  for (const auto& p : kPresets)
    if (p.kind != ScenarioKind::kCustom) out.push_back(p.kind);
  return out;
}

std::vector<double> decreasing_rates(std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(1.0 / static_cast<double>(n * i));
  return out;
}

std::vector<double> shifted_rates(std::size_t n, int k) {
  std::vector<double> out;
  for (std::size_t i = 1; i <= n; ++i)
    out.push_back(1.0 / static_cast<double>(n * (i + static_cast<std::size_t>(k))));
  return out;
}

std::vector<double> two_tails_rates(std::size_t n, int k) {
  std::vector<double> out;
  const std::size_t half = n / 2;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t shift = i <= half ? 0 : static_cast<std::size_t>(k);
    out.push_back(1.0 / static_cast<double>(n * (i + shift)));
  }
  return out;
}

ScenarioSpec preset(ScenarioKind kind) {
  ScenarioSpec s;
  s.kind = kind;
  const std::vector<PolicyKind> vs_rto{PolicyKind::kMsmw, PolicyKind::kRto};
  const std::vector<PolicyKind> vs_greedy{PolicyKind::kMsmw, PolicyKind::kMaxWeightGreedy};
  switch (kind) {
    case ScenarioKind::kFig1Example:
      s.sweep = {0};
      s.policies = {PolicyKind::kMsmw};
      break;
    case ScenarioKind::kFig2LinkCount:
      s.sweep = {4, 8, 16, 32, 64};
      s.policies = vs_rto;
      break;
    case ScenarioKind::kFig3DeltaSweep:
      s.sweep = range(1, 5);
      s.policies = vs_rto;
      break;
    case ScenarioKind::kFig4TwoTails:
    case ScenarioKind::kFig5Regularity:
    case ScenarioKind::kFig6Robustness:
      s.sweep = range(1, 20);
      s.policies = vs_rto;
      break;
    case ScenarioKind::kFig7GeneralLinks:
      s.sweep = range(20, 200, 20);
      s.policies = vs_greedy;
      break;
    case ScenarioKind::kFig8GeneralDelta:
      s.sweep = range(5, 15);
      s.policies = vs_greedy;
      break;
    case ScenarioKind::kCustom:
      break;
  }
  return s;
}

std::vector<SimConfig> expand_scenario(const ScenarioSpec& input) {
  ScenarioSpec spec = input;
  if (spec.kind == ScenarioKind::kCustom) {
    if (spec.custom.empty()) throw ConfigError("custom scenario has no configs");
    return spec.custom;
  }
  const ScenarioSpec defaults = preset(spec.kind);
  if (spec.sweep.empty()) spec.sweep = defaults.sweep;
  if (spec.policies.empty()) spec.policies = defaults.policies;
  const std::string name(scenario_name(spec.kind));

  std::vector<SimConfig> out;
  for (double v : spec.sweep) {
    const int iv = static_cast<int>(v);
    if (spec.kind != ScenarioKind::kFig1Example && (static_cast<double>(iv) != v || iv < 1))
      throw ConfigError(name + ": sweep values must be positive integers");
    std::vector<std::pair<std::string, NetworkSpec>> nets;
    switch (spec.kind) {
      case ScenarioKind::kFig1Example:
        nets.emplace_back(name, collocated({LinkSpec{0.5, 1.0, 1.0, 2}, LinkSpec{0.125, 1.0, 1.0, 4}}));
        break;
      case ScenarioKind::kFig2LinkCount: {
        const auto n = static_cast<std::size_t>(iv);
        nets.emplace_back(name, collocated(uniform_links(decreasing_rates(n), iv + 1, 2.0, 0.5)));
        break;
      }
      case ScenarioKind::kFig3DeltaSweep:
        nets.emplace_back(name, collocated(uniform_links(decreasing_rates(32), 32 + iv, 2.0, 0.5)));
        break;
      case ScenarioKind::kFig4TwoTails:
        nets.emplace_back(name, collocated(uniform_links(two_tails_rates(16, iv), 21, 2.0, 0.5)));
        break;
      case ScenarioKind::kFig5Regularity:
        nets.emplace_back(name, collocated(uniform_links(shifted_rates(16, iv), 21, 2.0, 0.5)));
        break;
      case ScenarioKind::kFig6Robustness:
        nets.emplace_back(name + "/decreasing",
                          collocated(uniform_links(shifted_rates(16, iv), 21, 2.0, 0.5)));
        nets.emplace_back(name + "/two_tails",
                          collocated(uniform_links(two_tails_rates(16, iv), 21, 2.0, 0.5)));
        break;
      case ScenarioKind::kFig7GeneralLinks:
        nets.emplace_back(name, geometric(spec, static_cast<std::size_t>(iv), 10,
                                          static_cast<std::uint64_t>(iv)));
        break;
      case ScenarioKind::kFig8GeneralDelta:
        // One network for the whole sweep; only delta changes.
        nets.emplace_back(name, geometric(spec, 160, iv, 160));
        break;
      case ScenarioKind::kCustom:
        break;
    }
    for (auto& [label, net] : nets) {
      for (PolicyKind p : spec.policies) {
        SimConfig c = base_config(spec, label, v, net, p);
        c.arrivals = ArrivalMode::kDeterministic;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

namespace {

using nlohmann::json;

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

ConflictGraph parse_conflicts(const json& j, std::size_t n) {
  if (!j.contains("conflicts")) return ConflictGraph::collocated(n);
  const json& c = j.at("conflicts");
  if (c.is_string()) {
    const auto s = c.get<std::string>();
    if (s == "collocated") return ConflictGraph::collocated(n);
    if (s == "none") return ConflictGraph::independent(n);
    throw ConfigError("conflicts must be \"collocated\", \"none\" or a list of 1-based pairs");
  }
  if (!c.is_array()) throw ConfigError("conflicts must be a string or an array");
  ConflictGraph g(n);
  for (const json& e : c) {
    if (!e.is_array() || e.size() != 2) throw ConfigError("each conflict must be a pair [i, j]");
    const auto a = e[0].get<std::size_t>();
    const auto b = e[1].get<std::size_t>();
    if (a < 1 || b < 1 || a > n || b > n) throw ConfigError("conflict ids are 1-based link indices");
    g.add_conflict(a - 1, b - 1);
  }
  return g;
}

}  // namespace

std::vector<SimConfig> parse_config_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("links") || !j.at("links").is_array() || j.at("links").empty())
    throw ConfigError("config needs a non-empty 'links' array");

  SimConfig base;
  base.label = field<std::string>(j, "label", "custom");
  base.sweep_value = field<double>(j, "sweep_value", 0.0);
  base.horizon_slots = field<Slot>(j, "horizon_slots", base.horizon_slots);
  base.num_runs = field<int>(j, "num_runs", base.num_runs);
  base.base_seed = field<std::uint64_t>(j, "base_seed", base.base_seed);
  const auto arrivals = field<std::string>(j, "arrivals", "bernoulli");
  if (arrivals == "bernoulli")
    base.arrivals = ArrivalMode::kBernoulli;
  else if (arrivals == "deterministic")
    base.arrivals = ArrivalMode::kDeterministic;
  else
    throw ConfigError("arrivals must be \"bernoulli\" or \"deterministic\"");

  for (const json& l : j.at("links")) {
    LinkSpec spec;
    spec.lambda = field<double>(l, "lambda", spec.lambda);
    spec.rate = field<double>(l, "rate", spec.rate);
    spec.channel = field<double>(l, "channel", spec.channel);
    spec.delta = field<int>(l, "delta", spec.delta);
    base.network.links.push_back(spec);
  }
  validate_links(base.network.links);
  base.network.graph = parse_conflicts(j, base.network.links.size());

  if (j.contains("rto")) {
    RtoWeights w = RtoWeights::defaults(base.network.links);
    const json& r = j.at("rto");
    w.alpha = field<std::vector<double>>(r, "alpha", w.alpha);
    w.beta = field<std::vector<double>>(r, "beta", w.beta);
    base.rto_weights = std::move(w);
  }

  std::vector<std::string> names;
  if (!j.contains("policy")) {
    names.push_back("msmw");
  } else if (j.at("policy").is_array()) {
    names = field<std::vector<std::string>>(j, "policy", {});
  } else {
    names.push_back(field<std::string>(j, "policy", "msmw"));
  }
  std::vector<SimConfig> out;
  for (const auto& name : names) {
    const auto kind = parse_policy(name);
    if (!kind) throw ConfigError("unknown policy '" + name + "'");
    SimConfig c = base;
    c.policy = *kind;
    validate_config(c);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SimConfig> load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

}  // namespace msmw
