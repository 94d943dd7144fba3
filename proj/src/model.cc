#include "msmw/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace msmw {

void validate_links(std::span<const LinkSpec> links) {
  for (std::size_t i = 0; i < links.size(); ++i) {
    const LinkSpec& l = links[i];
    std::ostringstream where;
    where << "link " << (i + 1) << ": ";
    if (!(l.lambda >= 0.0) || !std::isfinite(l.lambda))
      throw ConfigError(where.str() + "lambda must be finite and >= 0");
    if (!(l.rate > 0.0) || !std::isfinite(l.rate))
      throw ConfigError(where.str() + "rate must be finite and > 0");
    if (!(l.channel > 0.0 && l.channel <= 1.0))
      throw ConfigError(where.str() + "channel must lie in (0, 1]");
    if (l.delta < 1) throw ConfigError(where.str() + "delta must be >= 1");
  }
}

ConflictGraph::ConflictGraph(std::size_t n)
    : n_(n), adjacency_(n * n, 0), neighbors_(n) {}

ConflictGraph ConflictGraph::collocated(std::size_t n) {
  ConflictGraph g(n);
  for (LinkId a = 0; a < n; ++a)
    for (LinkId b = a + 1; b < n; ++b) g.add_conflict(a, b);
  return g;
}

void ConflictGraph::add_conflict(LinkId a, LinkId b) {
  if (a >= n_ || b >= n_) throw ConfigError("conflict endpoint out of range");
  if (a == b) throw ConfigError("a link cannot conflict with itself");
  if (conflicts(a, b)) return;
  adjacency_[a * n_ + b] = 1;
  adjacency_[b * n_ + a] = 1;
  neighbors_[a].push_back(b);
  neighbors_[b].push_back(a);
}

std::size_t ConflictGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : neighbors_) twice += nb.size();
  return twice / 2;
}

bool ConflictGraph::is_collocated() const {
  return edge_count() == n_ * (n_ == 0 ? 0 : n_ - 1) / 2;
}

bool ConflictGraph::is_independent(const std::vector<bool>& chosen) const {
  if (chosen.size() != n_) return false;
  for (LinkId a = 0; a < n_; ++a) {
    if (!chosen[a]) continue;
    for (LinkId b : neighbors_[a])
      if (chosen[b]) return false;
  }
  return true;
}

bool ConflictGraph::is_maximal_independent(const std::vector<bool>& chosen) const {
  if (!is_independent(chosen)) return false;
  for (LinkId a = 0; a < n_; ++a) {
    if (chosen[a]) continue;
    bool blocked = std::any_of(neighbors_[a].begin(), neighbors_[a].end(),
                               [&](LinkId b) { return chosen[b]; });
    if (!blocked) return false;
  }
  return true;
}

double QueueState::total() const {
  return std::accumulate(work.begin(), work.end(), 0.0);
}

std::vector<LinkId> Schedule::ids() const {
  std::vector<LinkId> out;
  for (LinkId i = 0; i < chosen.size(); ++i)
    if (chosen[i]) out.push_back(i);
  return out;
}

std::size_t Schedule::count() const {
  return static_cast<std::size_t>(std::count(chosen.begin(), chosen.end(), true));
}

double arrival_variance(const LinkSpec& link, ArrivalMode mode) {
  switch (mode) {
    case ArrivalMode::kBernoulli:
      return link.lambda * (1.0 - link.lambda);
    case ArrivalMode::kDeterministic:
      return 0.0;
  }
  return 0.0;
}

std::vector<double> arrival_variances(std::span<const LinkSpec> links, ArrivalMode mode) {
  std::vector<double> out;
  out.reserve(links.size());
  for (const LinkSpec& l : links) out.push_back(arrival_variance(l, mode));
  return out;
}

double unit_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ArrivalSample sample_arrivals(std::span<const LinkSpec> links, ArrivalMode mode, Rng& rng) {
  ArrivalSample sample;
  sample.packets.resize(links.size(), 0.0);
  for (std::size_t i = 0; i < links.size(); ++i) {
    const double lambda = links[i].lambda;
    if (mode == ArrivalMode::kDeterministic) {
      sample.packets[i] = lambda;
      continue;
    }
    if (lambda > 1.0) {
      std::ostringstream msg;
      msg << "link " << (i + 1) << ": lambda " << lambda
          << " > 1 cannot be realised by Bernoulli arrivals; use deterministic arrivals";
      throw ConfigError(msg.str());
    }
    // One draw per link per slot keeps the stream aligned regardless of lambda.
    const double u = unit_uniform(rng);
    sample.packets[i] = u < lambda ? 1.0 : 0.0;
  }
  return sample;
}

QueueState step_queues(const QueueState& state, const Schedule& schedule,
                       const ArrivalSample& arrivals, std::span<const LinkSpec> links) {
  const std::size_t n = links.size();
  if (state.work.size() != n || state.packets.size() != n || schedule.chosen.size() != n ||
      arrivals.packets.size() != n) {
    throw ConfigError("step_queues: state, schedule, arrivals and links differ in size");
  }
  QueueState next = state;
  for (std::size_t i = 0; i < n; ++i) {
    if (arrivals.packets[i] < 0.0) throw ConfigError("negative arrival count");
    const double scale = links[i].service_scale();
    double q = state.work[i];
    if (schedule.chosen[i]) q = std::max(q - 1.0, 0.0);
    q += arrivals.packets[i] / scale;
    next.work[i] = q;
    next.packets[i] = q * scale;
  }
  return next;
}

namespace {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

GeometricNetwork build_geometric_network(const GeometricParams& params, Rng& rng) {
  if (params.num_nodes < 2) throw ConfigError("geometric network needs at least 2 nodes");
  if (!(params.radius > 0.0)) throw ConfigError("radius must be > 0");
  if (!(params.area_side > 0.0)) throw ConfigError("area side must be > 0");
  if (params.num_links < 1) throw ConfigError("geometric network needs at least 1 link");

  GeometricNetwork net;
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  std::size_t best = 0;
  bool found = false;
  for (int attempt = 0; attempt < params.max_placements; ++attempt) {
    net.nodes.resize(params.num_nodes);
    for (Point& p : net.nodes) {
      p.x = unit_uniform(rng) * params.area_side;
      p.y = unit_uniform(rng) * params.area_side;
    }
    candidates.clear();
    for (std::size_t u = 0; u < params.num_nodes; ++u)
      for (std::size_t v = 0; v < params.num_nodes; ++v)
        if (u != v && distance(net.nodes[u], net.nodes[v]) <= params.radius)
          candidates.emplace_back(u, v);
    best = std::max(best, candidates.size());
    if (candidates.size() >= params.num_links) {
      found = true;
      break;
    }
  }
  if (!found) {
    std::ostringstream msg;
    msg << "could not place " << params.num_nodes << " nodes with " << params.num_links
        << " node pairs within radius " << params.radius << " after "
        << params.max_placements << " placements (best had " << best << ")";
    throw GenerationError(msg.str());
  }

  // Partial Fisher-Yates: the first num_links entries become the links.
  for (std::size_t i = 0; i < params.num_links; ++i) {
    const std::size_t remaining = candidates.size() - i;
    const auto j = i + static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(remaining));
    std::swap(candidates[i], candidates[std::min(j, candidates.size() - 1)]);
  }
  net.endpoints.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(params.num_links));

  const std::size_t n = params.num_links;
  net.graph = ConflictGraph(n);
  for (LinkId a = 0; a < n; ++a) {
    const auto [a_tx, a_rx] = net.endpoints[a];
    for (LinkId b = a + 1; b < n; ++b) {
      const auto [b_tx, b_rx] = net.endpoints[b];
      bool conflict = false;
      for (std::size_t x : {a_tx, a_rx})
        for (std::size_t y : {b_tx, b_rx})
          if (x == y || distance(net.nodes[x], net.nodes[y]) <= params.radius) conflict = true;
      if (conflict) net.graph.add_conflict(a, b);
    }
  }
  return net;
}

}  // namespace msmw
