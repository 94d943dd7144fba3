#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "msmw/report.h"
#include "msmw/scenarios.h"

using namespace msmw;

namespace {

std::string digest(const std::vector<SimConfig>& configs) {
  std::ostringstream out;
  for (const SimConfig& c : configs) {
    out << c.label << ' ' << policy_name(c.policy) << ' ' << format_real(c.sweep_value)
        << " n=" << c.network.size() << " edges=" << c.network.graph.edge_count()
        << " slots=" << c.horizon_slots << " runs=" << c.num_runs << " seed=" << c.base_seed << '\n';
    for (const LinkSpec& l : c.network.links)
      out << "  " << format_real(l.lambda) << ' ' << format_real(l.rate) << ' '
          << format_real(l.channel) << ' ' << l.delta << '\n';
  }
  return out.str();
}

std::string all_presets_digest() {
  std::string s;
  for (ScenarioKind k : builtin_scenarios()) s += digest(expand_scenario(preset(k)));
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("msmw_test_" + name);
}

}  // namespace

TEST_CASE("scenario names round-trip") {
  for (ScenarioKind k : builtin_scenarios()) CHECK(parse_scenario(scenario_name(k)) == k);
  CHECK_FALSE(parse_scenario("fig9_nonexistent").has_value());
  CHECK(builtin_scenarios().size() == 8);
}

TEST_CASE("link-count preset") {
  const auto configs = expand_scenario(preset(ScenarioKind::kFig2LinkCount));
  REQUIRE(configs.size() == 10);
  CHECK(configs[0].policy == PolicyKind::kMsmw);
  CHECK(configs[1].policy == PolicyKind::kRto);
  const SimConfig& n16 = configs[4];
  REQUIRE(n16.network.size() == 16);
  CHECK(n16.network.graph.is_collocated());
  for (std::size_t i = 0; i < 16; ++i) {
    const LinkSpec& l = n16.network.links[i];
    CHECK(l.lambda == doctest::Approx(1.0 / (16.0 * static_cast<double>(i + 1))).epsilon(1e-15));
    CHECK(l.delta == 17);
    CHECK(l.rate == 2.0);
    CHECK(l.channel == 0.5);
  }
}

TEST_CASE("rate shapes") {
  const auto tails = two_tails_rates(16, 3);
  for (std::size_t i = 1; i <= 8; ++i) CHECK(tails[i - 1] == doctest::Approx(1.0 / (16.0 * i)));
  for (std::size_t i = 9; i <= 16; ++i) CHECK(tails[i - 1] == doctest::Approx(1.0 / (16.0 * (i + 3))));

  ScenarioSpec s = preset(ScenarioKind::kFig4TwoTails);
  s.sweep = {3};
  const auto c = expand_scenario(s);
  REQUIRE(c.size() == 2);
  for (std::size_t i = 0; i < 16; ++i) CHECK(c[0].network.links[i].lambda == tails[i]);
  CHECK(c[0].network.links[0].delta == 21);

  const auto shifted = shifted_rates(16, 5);
  CHECK(shifted[0] == doctest::Approx(1.0 / 96));
  CHECK(decreasing_rates(4) == std::vector<double>{0.25, 0.125, 1.0 / 12, 0.0625});
}

TEST_CASE("general-network presets") {
  ScenarioSpec s = preset(ScenarioKind::kFig7GeneralLinks);
  CHECK(s.geometry.num_nodes == 40);
  CHECK(s.geometry.area_side == 100.0);
  CHECK(s.geometry.radius == 20.0);
  s.sweep = {40};
  const auto c = expand_scenario(s);
  REQUIRE(c.size() == 2);
  CHECK(c[1].policy == PolicyKind::kMaxWeightGreedy);
  CHECK(c[0].network.size() == 40);
  for (const LinkSpec& l : c[0].network.links) {
    CHECK(l.rate == 2.0);
    CHECK(l.channel == 0.5);
    CHECK(l.delta == 10);
    CHECK(l.lambda >= 0.0);
    CHECK(l.lambda <= 0.25);
  }
  // Both policies see the same network.
  CHECK(c[0].network.links.size() == c[1].network.links.size());
  CHECK(c[0].network.graph.edge_count() == c[1].network.graph.edge_count());

  const auto f8 = expand_scenario(preset(ScenarioKind::kFig8GeneralDelta));
  REQUIRE(f8.size() == 22);
  CHECK(f8.front().network.graph.edge_count() == f8.back().network.graph.edge_count());
  CHECK(f8.front().network.links[0].delta == 5);
  CHECK(f8.back().network.links[0].delta == 15);
}

TEST_CASE("bad sweeps are rejected") {
  ScenarioSpec s = preset(ScenarioKind::kFig2LinkCount);
  s.sweep = {2.5};
  CHECK_THROWS_AS(expand_scenario(s), ConfigError);
  CHECK_THROWS_AS(expand_scenario(ScenarioSpec{}), ConfigError);
}

TEST_CASE("preset expansion matches the golden listing") {
  const std::string got = all_presets_digest();
  CHECK(got == all_presets_digest());
  const std::filesystem::path golden = std::filesystem::path(MSMW_TEST_DATA_DIR) / "presets.golden";
  if (const char* regen = std::getenv("MSMW_REGEN_GOLDEN"); regen && *regen) {
    std::ofstream(golden, std::ios::binary) << got;
  }
  REQUIRE(std::filesystem::exists(golden));
  CHECK(got == slurp(golden));
}

TEST_CASE("JSON configs") {
  SUBCASE("full example") {
    const auto c = parse_config_json(R"({
      "label": "line", "horizon_slots": 500, "num_runs": 3, "base_seed": 9,
      "arrivals": "deterministic",
      "links": [{"lambda": 0.2, "delta": 3}, {"lambda": 0.1, "rate": 2, "channel": 0.5, "delta": 4},
                {"lambda": 0.3, "delta": 2}],
      "conflicts": [[1, 2], [2, 3]],
      "policy": ["msmw", "mw_greedy", "two_msmw"]
    })");
    REQUIRE(c.size() == 3);
    CHECK(c[0].label == "line");
    CHECK(c[0].horizon_slots == 500);
    CHECK(c[0].num_runs == 3);
    CHECK(c[0].base_seed == 9);
    CHECK(c[0].arrivals == ArrivalMode::kDeterministic);
    CHECK(c[1].policy == PolicyKind::kMaxWeightGreedy);
    CHECK(c[0].network.links[1].rate == 2.0);
    CHECK(c[0].network.graph.conflicts(0, 1));
    CHECK_FALSE(c[0].network.graph.conflicts(0, 2));
  }
  SUBCASE("defaults") {
    const auto c = parse_config_json(R"({"links": [{"lambda": 0.1, "delta": 2}, {"lambda": 0.1, "delta": 2}]})");
    REQUIRE(c.size() == 1);
    CHECK(c[0].policy == PolicyKind::kMsmw);
    CHECK(c[0].arrivals == ArrivalMode::kBernoulli);
    CHECK(c[0].network.graph.is_collocated());
  }
  SUBCASE("RTO overrides") {
    const auto c = parse_config_json(R"({"links": [{"lambda": 0.1, "delta": 2}, {"lambda": 0.1, "delta": 4}],
      "policy": "rto", "rto": {"alpha": [1, 2], "beta": [0, 0]}})");
    REQUIRE(c[0].rto_weights.has_value());
    CHECK(c[0].rto_weights->alpha == std::vector<double>{1, 2});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_config_json("{"), ConfigError);
    CHECK_THROWS_AS(parse_config_json("[]"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"links": []})"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"links": [{"lambda": "x", "delta": 2}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"links": [{"lambda": 0.1, "delta": 0}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"links": [{"lambda": 0.1, "delta": 2}], "policy": "fifo"})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"links": [{"lambda": 0.1, "delta": 2}], "conflicts": [[1, 2]]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"links": [{"lambda": 0.1, "delta": 2}], "arrivals": "poisson"})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"links": [{"lambda": 0.1, "delta": 2}, {"lambda": 0.1, "delta": 2}],
      "conflicts": "none", "policy": "rto"})"),
                    UnsupportedPolicyError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
  }
}

TEST_CASE("results CSV") {
  ScenarioSpec s = preset(ScenarioKind::kFig2LinkCount);
  s.horizon_slots = 200;
  const auto configs = expand_scenario(s);
  const auto rows = result_rows(configs, run_configs(configs, {}));
  CHECK(rows.size() == 5 * 2 * 10 + 10);
  CHECK(rows.front().row_type == "run");
  CHECK(rows.back().row_type == "aggregate");

  std::ostringstream out;
  write_results_csv(out, rows);
  std::istringstream in(out.str());
  const auto back = read_results_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].scenario == rows[i].scenario);
    CHECK(back[i].seed == rows[i].seed);
    CHECK(back[i].satisfaction_ratio == doctest::Approx(rows[i].satisfaction_ratio).epsilon(1e-8));
    CHECK(back[i].time_avg_mean_queue == doctest::Approx(rows[i].time_avg_mean_queue).epsilon(1e-8));
  }
  std::ostringstream again;
  write_results_csv(again, back);
  CHECK(again.str() == out.str());

  std::istringstream bad("nope\n");
  CHECK_THROWS_AS(read_results_csv(bad), ConfigError);
}

TEST_CASE("run_and_emit is byte-reproducible and reports I/O failures") {
  SimConfig c;
  c.label = "repro";
  c.network.links = {{0.4, 1, 1, 3}, {0.3, 1, 1, 3}, {0.2, 1, 1, 6}};
  c.network.graph = ConflictGraph::collocated(3);
  c.horizon_slots = 1000;
  c.num_runs = 4;
  const std::vector<SimConfig> configs{c};

  std::ostringstream log;
  const auto a = temp_path("a.csv");
  const auto b = temp_path("b.csv");
  RunOptions threaded;
  threaded.threads = 3;
  REQUIRE(run_and_emit(configs, a, {}, log) == 0);
  REQUIRE(run_and_emit(configs, b, threaded, log) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(run_and_emit(configs, "/proc/msmw/denied.csv", {}, log) != 0);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}
