#include "msmw/policies.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

namespace msmw {

StageState StageState::initial(std::size_t n) {
  StageState s;
  s.stage.assign(n, 0);
  s.served_in_frame.assign(n, false);
  s.last_service.assign(n, std::nullopt);
  s.since_last_service.assign(n, 0);
  return s;
}

StageState update_stages(const StageState& stages, Slot t, std::span<const LinkSpec> links,
                         const Schedule& prev_schedule) {
  const std::size_t n = links.size();
  if (t < 1) throw ConfigError("slot index must be >= 1");
  if (stages.size() != n || prev_schedule.chosen.size() != n)
    throw ConfigError("update_stages: stage state, schedule and links differ in size");

  StageState next = stages;
  next.slot = t;
  for (std::size_t i = 0; i < n; ++i) {
    const Slot delta = links[i].delta;
    if (prev_schedule.chosen[i]) {
      next.last_service[i] = t - 1;
      next.served_in_frame[i] = true;
    }
    // Slot t-1 belonged to the previous frame when t opens a new one.
    const Slot offset = (t - 1) % delta;
    if (offset == 0) next.served_in_frame[i] = false;
    next.stage[i] = next.served_in_frame[i] ? 0 : static_cast<int>(delta - offset);
    next.since_last_service[i] = next.last_service[i] ? t - *next.last_service[i] : t;
  }
  return next;
}

GroupPartition partition_groups(const StageState& stages) {
  std::map<int, std::vector<LinkId>> by_stage;
  GroupPartition p;
  p.groups.emplace_back();
  for (LinkId i = 0; i < stages.size(); ++i) {
    if (stages.stage[i] == 0)
      p.groups[0].push_back(i);
    else
      by_stage[stages.stage[i]].push_back(i);
  }
  for (auto& [stage, ids] : by_stage) p.groups.push_back(std::move(ids));
  return p;
}

namespace {

void take(LinkId pick, const ConflictGraph& graph, std::vector<bool>& alive,
          std::vector<bool>& chosen) {
  chosen[pick] = true;
  alive[pick] = false;
  for (LinkId nb : graph.neighbors(pick)) alive[nb] = false;
}

// Visits gp_1..gp_M and then gp_0, calling select(group) on the first group
// with a live link until no live link remains. select returns the pick.
template <typename Select>
void scan_groups(const GroupPartition& partition, const ConflictGraph& graph,
                 std::vector<bool>& alive, std::vector<bool>& chosen, Select&& select) {
  std::vector<std::size_t> order;
  for (std::size_t g = 1; g < partition.groups.size(); ++g) order.push_back(g);
  order.push_back(0);

  for (std::size_t pos = 0; pos < order.size();) {
    const auto& group = partition.groups[order[pos]];
    const bool any_alive = std::any_of(group.begin(), group.end(),
                                       [&](LinkId i) { return alive[i]; });
    if (!any_alive) {
      ++pos;
      continue;
    }
    take(select(order[pos], group), graph, alive, chosen);
  }
}

// Largest value among live members of `group`; group ids are ascending so a
// strict comparison keeps the smallest id on ties.
template <typename Value>
LinkId argmax_alive(const std::vector<LinkId>& group, const std::vector<bool>& alive,
                    Value&& value) {
  LinkId best = group.front();
  bool have = false;
  double best_value = 0.0;
  for (LinkId i : group) {
    if (!alive[i]) continue;
    const double v = value(i);
    if (!have || v > best_value) {
      best = i;
      best_value = v;
      have = true;
    }
  }
  return best;
}

void check_sizes(std::size_t a, std::size_t b, std::size_t c, const char* what) {
  if (a != b || a != c) throw ConfigError(std::string(what) + ": inputs differ in size");
}

}  // namespace

Schedule msmw_schedule(const StageState& stages, const QueueState& queues,
                       const ConflictGraph& graph) {
  const std::size_t n = graph.size();
  check_sizes(n, stages.size(), queues.size(), "msmw_schedule");
  Schedule out = Schedule::none(n, stages.slot);
  std::vector<bool> alive(n, true);
  scan_groups(partition_groups(stages), graph, alive, out.chosen,
              [&](std::size_t, const std::vector<LinkId>& group) {
                return argmax_alive(group, alive, [&](LinkId i) { return queues.work[i]; });
              });
  return out;
}

RtoWeights RtoWeights::defaults(std::span<const LinkSpec> links) {
  RtoWeights w;
  for (const LinkSpec& l : links) {
    w.alpha.push_back(1.0 / l.service_scale());
    w.beta.push_back(1.0 / static_cast<double>(l.delta));
  }
  return w;
}

Schedule rto_schedule(const QueueState& queues, const StageState& stages,
                      const RtoWeights& weights, const ConflictGraph& graph) {
  const std::size_t n = graph.size();
  check_sizes(n, stages.size(), queues.size(), "rto_schedule");
  check_sizes(n, weights.alpha.size(), weights.beta.size(), "rto_schedule weights");
  if (!graph.is_collocated())
    throw UnsupportedPolicyError("RTO is only defined on collocated networks");

  Schedule out = Schedule::none(n, stages.slot);
  if (n == 0) return out;
  LinkId best = 0;
  double best_weight = 0.0;
  for (LinkId i = 0; i < n; ++i) {
    const double w = weights.alpha[i] * queues.work[i] +
                     weights.beta[i] * static_cast<double>(stages.since_last_service[i]);
    if (i == 0 || w > best_weight) {
      best = i;
      best_weight = w;
    }
  }
  out.chosen[best] = true;
  return out;
}

Schedule mw_greedy_schedule(const QueueState& queues, const ConflictGraph& graph) {
  const std::size_t n = graph.size();
  if (queues.size() != n) throw ConfigError("mw_greedy_schedule: inputs differ in size");
  Schedule out = Schedule::none(n);
  std::vector<bool> alive(n, true);
  for (;;) {
    std::optional<LinkId> best;
    for (LinkId i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      if (!best) {
        best = i;
        continue;
      }
      const double qi = queues.work[i];
      const double qb = queues.work[*best];
      if (qi > qb || (qi == qb && graph.degree(i) < graph.degree(*best))) best = i;
    }
    if (!best) break;
    take(*best, graph, alive, out.chosen);
  }
  return out;
}

double DualQueueState::total() const {
  return std::accumulate(frequency.begin(), frequency.end(), 0.0) +
         std::accumulate(excess.begin(), excess.end(), 0.0);
}

TwoQueueDecision two_msmw_schedule(const DualQueueState& queues, const StageState& stages,
                                   const ConflictGraph& graph) {
  const std::size_t n = graph.size();
  check_sizes(n, stages.size(), queues.size(), "two_msmw_schedule");
  check_sizes(n, queues.frequency.size(), queues.excess.size(), "two_msmw_schedule queues");
  TwoQueueDecision out{Schedule::none(n, stages.slot), std::vector<DrainTarget>(n, DrainTarget::kNone)};
  std::vector<bool> alive(n, true);
  scan_groups(partition_groups(stages), graph, alive, out.schedule.chosen,
              [&](std::size_t group_index, const std::vector<LinkId>& group) {
                const bool stage_zero = group_index == 0;
                const auto& weights = stage_zero ? queues.excess : queues.frequency;
                const LinkId pick =
                    argmax_alive(group, alive, [&](LinkId i) { return weights[i]; });
                out.drain[pick] = stage_zero ? DrainTarget::kExcess : DrainTarget::kFrequency;
                return pick;
              });
  return out;
}

DualQueueState step_dual_queues(const DualQueueState& queues, const TwoQueueDecision& decision,
                                const ArrivalSample& arrivals, std::span<const LinkSpec> links) {
  const std::size_t n = links.size();
  if (queues.size() != n || queues.excess.size() != n || decision.drain.size() != n ||
      arrivals.packets.size() != n)
    throw ConfigError("step_dual_queues: inputs differ in size");
  DualQueueState next = queues;
  for (std::size_t i = 0; i < n; ++i) {
    if (decision.drain[i] == DrainTarget::kFrequency)
      next.frequency[i] = std::max(next.frequency[i] - 1.0, 0.0);
    else if (decision.drain[i] == DrainTarget::kExcess)
      next.excess[i] = std::max(next.excess[i] - 1.0, 0.0);

    const double work = arrivals.packets[i] / links[i].service_scale();
    const double share = std::min(work, 1.0 / static_cast<double>(links[i].delta));
    next.frequency[i] += share;
    next.excess[i] += work - share;
  }
  return next;
}

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kMsmw:
      return "msmw";
    case PolicyKind::kRto:
      return "rto";
    case PolicyKind::kMaxWeightGreedy:
      return "mw_greedy";
    case PolicyKind::kTwoMsmw:
      return "two_msmw";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (PolicyKind k : {PolicyKind::kMsmw, PolicyKind::kRto, PolicyKind::kMaxWeightGreedy,
                       PolicyKind::kTwoMsmw})
    if (lower == policy_name(k)) return k;
  return std::nullopt;
}

}  // namespace msmw
