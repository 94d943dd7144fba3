// Network model: links, conflict graph, arrivals and the fluid backlog
// recursion Q[t] = max(Q[t-1] - s[t-1], 0) + A[t] / (r c).
//
// Link ids are 0-based internally and printed 1-based.

#ifndef MSMW_MODEL_H_
#define MSMW_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace msmw {

using LinkId = std::size_t;
using Slot = std::int64_t;
using Rng = std::mt19937_64;

// Absolute tolerance for comparisons on backlog and rate sums.
inline constexpr double kTolerance = 1e-12;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LinkSpec {
  double lambda = 0.0;   // expected packets per slot
  double rate = 1.0;     // packets delivered per successful slot (r)
  double channel = 1.0;  // per-slot success probability (c)
  int delta = 1;         // must be served once in every frame of delta slots

  double service_scale() const { return rate * channel; }
  // Expected work per slot, in slots: lambda / (r c).
  double work_rate() const { return lambda / service_scale(); }
};

// Throws ConfigError unless lambda >= 0, rate > 0, 0 < channel <= 1 and
// delta >= 1 for every link.
void validate_links(std::span<const LinkSpec> links);

class ConflictGraph {
 public:
  ConflictGraph() = default;
  explicit ConflictGraph(std::size_t n);

  static ConflictGraph collocated(std::size_t n);
  static ConflictGraph independent(std::size_t n) { return ConflictGraph(n); }

  std::size_t size() const { return n_; }
  void add_conflict(LinkId a, LinkId b);
  bool conflicts(LinkId a, LinkId b) const { return adjacency_[a * n_ + b] != 0; }
  const std::vector<LinkId>& neighbors(LinkId a) const { return neighbors_[a]; }
  std::size_t degree(LinkId a) const { return neighbors_[a].size(); }
  std::size_t edge_count() const;

  // True iff every pair of distinct links conflicts.
  bool is_collocated() const;

  bool is_independent(const std::vector<bool>& chosen) const;
  // Independent, and no unchosen link could be added without a conflict.
  bool is_maximal_independent(const std::vector<bool>& chosen) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<LinkId>> neighbors_;
};

struct NetworkSpec {
  std::vector<LinkSpec> links;
  ConflictGraph graph;

  std::size_t size() const { return links.size(); }
};

struct ArrivalSample {
  std::vector<double> packets;  // A_i[t]
};

enum class ArrivalMode {
  kBernoulli,      // A_i in {0, 1}, P(A_i = 1) = lambda_i
  kDeterministic,  // A_i = lambda_i every slot
};

struct QueueState {
  std::vector<double> work;     // Q_i, backlog in slots
  std::vector<double> packets;  // undelivered packets, Q_i * r_i c_i

  static QueueState empty(std::size_t n) {
    return QueueState{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  }
  std::size_t size() const { return work.size(); }
  double total() const;
};

struct Schedule {
  Slot slot = 0;
  std::vector<bool> chosen;

  static Schedule none(std::size_t n, Slot slot = 0) {
    return Schedule{slot, std::vector<bool>(n, false)};
  }
  std::vector<LinkId> ids() const;
  std::size_t count() const;
};

// Variance of one slot's arrival count under the given mode.
double arrival_variance(const LinkSpec& link, ArrivalMode mode);
std::vector<double> arrival_variances(std::span<const LinkSpec> links, ArrivalMode mode);

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double unit_uniform(Rng& rng);

ArrivalSample sample_arrivals(std::span<const LinkSpec> links, ArrivalMode mode, Rng& rng);

QueueState step_queues(const QueueState& state, const Schedule& schedule,
                       const ArrivalSample& arrivals, std::span<const LinkSpec> links);

struct GeometricParams {
  std::size_t num_nodes = 40;
  double area_side = 100.0;
  double radius = 20.0;
  std::size_t num_links = 160;
  // Node placements tried before giving up on finding enough candidate pairs.
  int max_placements = 1000;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct GeometricNetwork {
  std::vector<Point> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> endpoints;  // (tx, rx) per link
  ConflictGraph graph;
};

// Places nodes uniformly in the square, draws num_links distinct ordered
// pairs no farther apart than radius, and marks two links as conflicting if
// they share a node or any endpoint of one lies within radius of any
// endpoint of the other.
GeometricNetwork build_geometric_network(const GeometricParams& params, Rng& rng);

}  // namespace msmw

#endif  // MSMW_MODEL_H_
