// Slot-by-slot simulation engine and per-run metrics.

#ifndef MSMW_SIM_H_
#define MSMW_SIM_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msmw/model.h"
#include "msmw/policies.h"

namespace msmw {

struct SimConfig {
  std::string label;          // scenario id carried into reports
  double sweep_value = 0.0;   // value of the swept parameter for this config
  NetworkSpec network;
  PolicyKind policy = PolicyKind::kMsmw;
  std::optional<RtoWeights> rto_weights;  // defaults when empty
  ArrivalMode arrivals = ArrivalMode::kBernoulli;
  Slot horizon_slots = 10000;
  int num_runs = 10;
  std::uint64_t base_seed = 1;
  bool trace_enabled = false;

  std::uint64_t run_seed(int run) const { return base_seed + static_cast<std::uint64_t>(run); }
};

// Throws ConfigError / UnsupportedPolicyError on an unusable config.
void validate_config(const SimConfig& config);

struct RunMetrics {
  std::vector<bool> frequency_satisfied;
  double satisfaction_ratio = 0.0;
  double time_avg_total_queue = 0.0;
  double time_avg_mean_queue = 0.0;
  double max_queue_observed = 0.0;
  std::vector<double> inter_service_std;
  double mean_inter_service_std = 0.0;
  double max_inter_service_std = 0.0;
};

// One row of the per-slot trace: the backlog and stage each link had at the
// start of slot t, and the links scheduled in t.
struct TraceRecord {
  Slot slot = 0;
  std::vector<LinkId> scheduled;
  std::vector<double> queue;
  std::vector<int> stage;
};

using TraceSink = std::function<void(const TraceRecord&)>;

struct RunResult {
  RunMetrics metrics;
  std::vector<std::vector<Slot>> service_log;  // ascending service slots per link
};

// Runs slots 1..horizon: sample arrivals, apply the backlog update, advance
// stages, schedule, and accumulate metrics. Queue statistics are taken after
// the slot's arrivals. The trace sink, if given, sees every slot.
RunResult run_simulation(const SimConfig& config, std::uint64_t seed,
                         const TraceSink& trace = {});

// Compliance per link: every complete frame [(k-1)d+1, kd] inside the
// horizon contains a service. The trailing partial frame is not judged.
std::vector<bool> check_frequency_compliance(std::span<const std::vector<Slot>> service_log,
                                             std::span<const LinkSpec> links, Slot horizon);

// Population standard deviation of the gaps between consecutive services;
// 0 with fewer than two gaps.
double inter_service_std(std::span<const Slot> services);

// Recomputes compliance and regularity metrics from a service log.
void fill_service_metrics(RunMetrics& metrics, std::span<const std::vector<Slot>> service_log,
                          std::span<const LinkSpec> links, Slot horizon);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single run
};

struct AggregateMetrics {
  std::size_t runs = 0;
  MetricSummary satisfaction_ratio;
  MetricSummary time_avg_total_queue;
  MetricSummary time_avg_mean_queue;
  MetricSummary max_queue_observed;
  MetricSummary mean_inter_service_std;
  MetricSummary max_inter_service_std;
};

AggregateMetrics aggregate_runs(std::span<const RunMetrics> runs);

// Comma-separated trace: t,scheduled,Q_1..Q_N,ST_1..ST_N with scheduled ids
// 1-based and ';'-separated.
void write_trace_header(std::ostream& out, std::size_t num_links);
void write_trace_record(std::ostream& out, const TraceRecord& record);

}  // namespace msmw

#endif  // MSMW_SIM_H_
