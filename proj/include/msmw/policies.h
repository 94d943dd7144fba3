// Scheduling policies. Each call returns a maximal conflict-free set of
// links for one slot; every argmax breaks ties toward the smallest link id.

#ifndef MSMW_POLICIES_H_
#define MSMW_POLICIES_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "msmw/model.h"

namespace msmw {

class UnsupportedPolicyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Per-link frame bookkeeping. A link's k-th frame spans slots
// (k-1)*delta+1 .. k*delta; stage is 0 once the link has been served in the
// current frame, otherwise the number of slots left in the frame.
struct StageState {
  Slot slot = 0;  // 0 before the first update
  std::vector<int> stage;
  std::vector<bool> served_in_frame;
  std::vector<std::optional<Slot>> last_service;
  std::vector<Slot> since_last_service;  // t - last service, or t if never served

  static StageState initial(std::size_t n);
  std::size_t size() const { return stage.size(); }
};

// Advances the bookkeeping to slot t given the schedule used in slot t-1
// (an empty schedule at t = 1).
StageState update_stages(const StageState& stages, Slot t, std::span<const LinkSpec> links,
                         const Schedule& prev_schedule);

// groups[0] holds the stage-0 links; groups[1..M] hold the remaining links
// bucketed by stage in strictly increasing stage order.
struct GroupPartition {
  std::vector<std::vector<LinkId>> groups;

  std::size_t nonzero_groups() const { return groups.empty() ? 0 : groups.size() - 1; }
};

GroupPartition partition_groups(const StageState& stages);

Schedule msmw_schedule(const StageState& stages, const QueueState& queues,
                       const ConflictGraph& graph);

struct RtoWeights {
  std::vector<double> alpha;  // backlog factor
  std::vector<double> beta;   // time-since-last-service factor

  // alpha_i = 1/(r_i c_i), beta_i = 1/delta_i.
  static RtoWeights defaults(std::span<const LinkSpec> links);
};

// Serves the single link maximising alpha_i Q_i + beta_i T_i. Collocated
// graphs only.
Schedule rto_schedule(const QueueState& queues, const StageState& stages,
                      const RtoWeights& weights, const ConflictGraph& graph);

// Greedy maximal-weight baseline: repeatedly take the largest backlog,
// preferring lower conflict degree, then the smaller id.
Schedule mw_greedy_schedule(const QueueState& queues, const ConflictGraph& graph);

// Two queues per link: `frequency` receives at most 1/delta_i work per slot
// and is drained when the link is picked from a nonzero-stage group;
// `excess` receives the rest and is drained when picked from the stage-0 group.
struct DualQueueState {
  std::vector<double> frequency;
  std::vector<double> excess;

  static DualQueueState empty(std::size_t n) {
    return DualQueueState{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  }
  std::size_t size() const { return frequency.size(); }
  double total() const;
};

enum class DrainTarget { kNone, kFrequency, kExcess };

struct TwoQueueDecision {
  Schedule schedule;
  std::vector<DrainTarget> drain;
};

TwoQueueDecision two_msmw_schedule(const DualQueueState& queues, const StageState& stages,
                                   const ConflictGraph& graph);

DualQueueState step_dual_queues(const DualQueueState& queues, const TwoQueueDecision& decision,
                                const ArrivalSample& arrivals, std::span<const LinkSpec> links);

enum class PolicyKind { kMsmw, kRto, kMaxWeightGreedy, kTwoMsmw };

std::string_view policy_name(PolicyKind kind);
// Accepts the names produced by policy_name, case-insensitively.
std::optional<PolicyKind> parse_policy(std::string_view name);

}  // namespace msmw

#endif  // MSMW_POLICIES_H_
