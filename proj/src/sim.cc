#include "msmw/sim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace msmw {

void validate_config(const SimConfig& config) {
  const NetworkSpec& net = config.network;
  validate_links(net.links);
  if (net.graph.size() != net.links.size())
    throw ConfigError("conflict graph size does not match the number of links");
  if (config.horizon_slots < 1) throw ConfigError("horizon_slots must be >= 1");
  if (config.num_runs < 1) throw ConfigError("num_runs must be >= 1");
  if (config.arrivals == ArrivalMode::kBernoulli) {
    for (std::size_t i = 0; i < net.links.size(); ++i)
      if (net.links[i].lambda > 1.0)
        throw ConfigError("link " + std::to_string(i + 1) +
                          ": lambda > 1 needs deterministic arrivals");
  }
  if (config.policy == PolicyKind::kRto) {
    if (!net.graph.is_collocated())
      throw UnsupportedPolicyError("RTO is only defined on collocated networks");
    if (config.rto_weights && (config.rto_weights->alpha.size() != net.size() ||
                               config.rto_weights->beta.size() != net.size()))
      throw ConfigError("RTO weight vectors must have one entry per link");
  }
}

RunResult run_simulation(const SimConfig& config, std::uint64_t seed, const TraceSink& trace) {
  validate_config(config);
  const auto& links = config.network.links;
  const auto& graph = config.network.graph;
  const std::size_t n = links.size();
  const RtoWeights rto = config.rto_weights ? *config.rto_weights : RtoWeights::defaults(links);
  const bool dual = config.policy == PolicyKind::kTwoMsmw;

  Rng rng(seed);
  QueueState queues = QueueState::empty(n);
  DualQueueState dual_queues = DualQueueState::empty(n);
  StageState stages = StageState::initial(n);
  TwoQueueDecision decision{Schedule::none(n), std::vector<DrainTarget>(n, DrainTarget::kNone)};

  RunResult result;
  result.service_log.resize(n);
  double queue_sum = 0.0;
  double queue_max = 0.0;
  std::vector<double> backlog(n, 0.0);

  for (Slot t = 1; t <= config.horizon_slots; ++t) {
    const ArrivalSample arrivals = sample_arrivals(links, config.arrivals, rng);
    if (dual) {
      dual_queues = step_dual_queues(dual_queues, decision, arrivals, links);
      for (std::size_t i = 0; i < n; ++i)
        backlog[i] = dual_queues.frequency[i] + dual_queues.excess[i];
    } else {
      queues = step_queues(queues, decision.schedule, arrivals, links);
      backlog = queues.work;
    }
    stages = update_stages(stages, t, links, decision.schedule);

    switch (config.policy) {
      case PolicyKind::kMsmw:
        decision.schedule = msmw_schedule(stages, queues, graph);
        break;
      case PolicyKind::kRto:
        decision.schedule = rto_schedule(queues, stages, rto, graph);
        break;
      case PolicyKind::kMaxWeightGreedy:
        decision.schedule = mw_greedy_schedule(queues, graph);
        break;
      case PolicyKind::kTwoMsmw:
        decision = two_msmw_schedule(dual_queues, stages, graph);
        break;
    }
    decision.schedule.slot = t;

    double total = 0.0;
    for (double q : backlog) {
      total += q;
      queue_max = std::max(queue_max, q);
    }
    if (!std::isfinite(total)) {
      std::ostringstream msg;
      msg << "non-finite backlog at slot " << t << " in '" << config.label << "'";
      throw std::runtime_error(msg.str());
    }
    queue_sum += total;

    for (std::size_t i = 0; i < n; ++i)
      if (decision.schedule.chosen[i]) result.service_log[i].push_back(t);

    if (trace) trace(TraceRecord{t, decision.schedule.ids(), backlog, stages.stage});
  }

  RunMetrics& m = result.metrics;
  m.time_avg_total_queue = queue_sum / static_cast<double>(config.horizon_slots);
  m.time_avg_mean_queue = n == 0 ? 0.0 : m.time_avg_total_queue / static_cast<double>(n);
  m.max_queue_observed = queue_max;
  fill_service_metrics(m, result.service_log, links, config.horizon_slots);
  return result;
}

std::vector<bool> check_frequency_compliance(std::span<const std::vector<Slot>> service_log,
                                             std::span<const LinkSpec> links, Slot horizon) {
  if (service_log.size() != links.size())
    throw ConfigError("service log and links differ in size");
  std::vector<bool> out(links.size(), true);
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Slot delta = links[i].delta;
    const Slot frames = horizon / delta;
    std::vector<bool> hit(static_cast<std::size_t>(frames), false);
    for (Slot s : service_log[i]) {
      const Slot frame = (s - 1) / delta;
      if (s >= 1 && frame < frames) hit[static_cast<std::size_t>(frame)] = true;
    }
    out[i] = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  }
  return out;
}

double inter_service_std(std::span<const Slot> services) {
  if (services.size() < 3) return 0.0;
  const std::size_t gaps = services.size() - 1;
  double mean = 0.0;
  for (std::size_t k = 1; k < services.size(); ++k)
    mean += static_cast<double>(services[k] - services[k - 1]);
  mean /= static_cast<double>(gaps);
  double ss = 0.0;
  for (std::size_t k = 1; k < services.size(); ++k) {
    const double d = static_cast<double>(services[k] - services[k - 1]) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(gaps));
}

void fill_service_metrics(RunMetrics& m, std::span<const std::vector<Slot>> service_log,
                          std::span<const LinkSpec> links, Slot horizon) {
  const std::size_t n = links.size();
  m.frequency_satisfied = check_frequency_compliance(service_log, links, horizon);
  const auto satisfied = std::count(m.frequency_satisfied.begin(), m.frequency_satisfied.end(), true);
  m.satisfaction_ratio = n == 0 ? 1.0 : static_cast<double>(satisfied) / static_cast<double>(n);

  m.inter_service_std.assign(n, 0.0);
  m.mean_inter_service_std = 0.0;
  m.max_inter_service_std = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = inter_service_std(service_log[i]);
    m.inter_service_std[i] = s;
    m.mean_inter_service_std += s;
    m.max_inter_service_std = std::max(m.max_inter_service_std, s);
  }
  if (n > 0) m.mean_inter_service_std /= static_cast<double>(n);
}

namespace {

template <typename Get>
MetricSummary summarize(std::span<const RunMetrics> runs, Get&& get) {
  MetricSummary s;
  for (const RunMetrics& r : runs) s.mean += get(r);
  s.mean /= static_cast<double>(runs.size());
  if (runs.size() > 1) {
    double ss = 0.0;
    for (const RunMetrics& r : runs) ss += (get(r) - s.mean) * (get(r) - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(runs.size() - 1));
  }
  return s;
}

}  // namespace

AggregateMetrics aggregate_runs(std::span<const RunMetrics> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate_runs: no runs");
  AggregateMetrics a;
  a.runs = runs.size();
  a.satisfaction_ratio = summarize(runs, [](const RunMetrics& r) { return r.satisfaction_ratio; });
  a.time_avg_total_queue = summarize(runs, [](const RunMetrics& r) { return r.time_avg_total_queue; });
  a.time_avg_mean_queue = summarize(runs, [](const RunMetrics& r) { return r.time_avg_mean_queue; });
  a.max_queue_observed = summarize(runs, [](const RunMetrics& r) { return r.max_queue_observed; });
  a.mean_inter_service_std = summarize(runs, [](const RunMetrics& r) { return r.mean_inter_service_std; });
  a.max_inter_service_std = summarize(runs, [](const RunMetrics& r) { return r.max_inter_service_std; });
  return a;
}

void write_trace_header(std::ostream& out, std::size_t num_links) {
  out << "t,scheduled";
  for (std::size_t i = 1; i <= num_links; ++i) out << ",Q_" << i;
  for (std::size_t i = 1; i <= num_links; ++i) out << ",ST_" << i;
  out << '\n';
}

void write_trace_record(std::ostream& out, const TraceRecord& record) {
  out << record.slot << ',';
  for (std::size_t k = 0; k < record.scheduled.size(); ++k)
    out << (k ? ";" : "") << (record.scheduled[k] + 1);
  char buf[32];
  for (double q : record.queue) {
    std::snprintf(buf, sizeof buf, "%.9g", q);
    out << ',' << buf;
  }
  for (int st : record.stage) out << ',' << st;
  out << '\n';
}

}  // namespace msmw
