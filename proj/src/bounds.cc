#include "msmw/bounds.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

namespace msmw {

namespace {

void check_variances(std::span<const LinkSpec> links, std::span<const double> var) {
  if (var.size() != links.size()) throw ConfigError("one variance per link is required");
  for (double v : var)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("variances must be finite and >= 0");
}

double excess(const LinkSpec& l) {
  return std::max(l.work_rate() - 1.0 / static_cast<double>(l.delta), 0.0);
}

bool has_excess(const LinkSpec& l) {
  return l.work_rate() - 1.0 / static_cast<double>(l.delta) > 0.0;
}

// Log-sum-exp over terms given as logarithms; -inf entries contribute zero.
double log_sum_exp(const std::vector<double>& logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - top);
  return top + std::log(acc);
}

double log_or_neg_inf(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

void require_feasible(std::span<const LinkSpec> links, const char* what) {
  if (!check_frequency_feasibility(links))
    throw BoundError(std::string(what) + ": sum of 1/delta exceeds 1");
}

}  // namespace

double frequency_load(std::span<const LinkSpec> links) {
  double s = 0.0;
  for (const LinkSpec& l : links) s += 1.0 / static_cast<double>(l.delta);
  return s;
}

double slack(std::span<const LinkSpec> links) { return 1.0 - frequency_load(links); }

bool check_frequency_feasibility(std::span<const LinkSpec> links) {
  return frequency_load(links) <= 1.0 + kTolerance;
}

bool check_supportability(std::span<const LinkSpec> links) {
  double lhs = 0.0;
  for (const LinkSpec& l : links) lhs += excess(l);
  return lhs < slack(links) - kTolerance;
}

double simplex_volume(int n, double beta) {
  if (n < 1) throw ConfigError("simplex dimension must be >= 1");
  if (!(beta >= 0.0)) throw ConfigError("simplex budget must be >= 0");
  if (beta == 0.0) return 0.0;
  return std::exp(n * std::log(beta) - std::lgamma(n + 1.0));
}

double capacity_ratio_bound(std::span<const LinkSpec> links) {
  validate_links(links);
  if (links.empty()) throw ConfigError("capacity ratio needs at least one link");
  require_feasible(links, "capacity_ratio_bound");
  const int n = static_cast<int>(links.size());
  const double eps = std::max(slack(links), 0.0);
  int delta_min = links.front().delta;
  for (const LinkSpec& l : links) delta_min = std::min(delta_min, l.delta);

  const double log_nfact = std::lgamma(n + 1.0);
  const double log_eps = log_or_neg_inf(eps);
  const double log_inv_dmin = -std::log(static_cast<double>(delta_min));
  std::vector<double> logs;
  for (int t = 0; t <= n; ++t) {
    const double log_binom = log_nfact - std::lgamma(t + 1.0) - std::lgamma(n - t + 1.0);
    const double log_eps_t = t == 0 ? 0.0 : t * log_eps;
    logs.push_back(log_nfact + log_binom + log_eps_t - std::lgamma(t + 1.0) +
                   (n - t) * log_inv_dmin);
  }
  return std::exp(log_sum_exp(logs));
}

double capacity_ratio_unrelaxed(std::span<const LinkSpec> links) {
  validate_links(links);
  if (links.empty()) throw ConfigError("capacity ratio needs at least one link");
  require_feasible(links, "capacity_ratio_unrelaxed");
  const std::size_t n = links.size();
  const double eps = std::max(slack(links), 0.0);

  // elem[k] = e_k(1/delta_1, .., 1/delta_n) by the usual O(n^2) recurrence.
  std::vector<double> elem(n + 1, 0.0);
  elem[0] = 1.0;
  for (const LinkSpec& l : links) {
    const double x = 1.0 / static_cast<double>(l.delta);
    for (std::size_t k = n; k >= 1; --k) elem[k] += x * elem[k - 1];
  }
  const double log_nfact = std::lgamma(static_cast<double>(n) + 1.0);
  const double log_eps = log_or_neg_inf(eps);
  std::vector<double> logs;
  for (std::size_t t = 0; t <= n; ++t) {
    const double log_eps_t = t == 0 ? 0.0 : static_cast<double>(t) * log_eps;
    logs.push_back(log_nfact + log_eps_t - std::lgamma(static_cast<double>(t) + 1.0) +
                   log_or_neg_inf(elem[n - t]));
  }
  return std::exp(log_sum_exp(logs));
}

double mw_queue_bound(std::span<const LinkSpec> links, std::span<const double> arrival_var) {
  check_variances(links, arrival_var);
  double s = 0.0;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const double lam = links[i].lambda;
    s += (lam + arrival_var[i] - lam * lam) / 2.0;
  }
  return s;
}

std::vector<double> work_variances(std::span<const LinkSpec> links,
                                   std::span<const double> arrival_var) {
  check_variances(links, arrival_var);
  std::vector<double> out;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const double scale = links[i].service_scale();
    out.push_back(arrival_var[i] / (scale * scale));
  }
  return out;
}

double bound_B1(std::span<const LinkSpec> links, std::span<const double> work_var) {
  check_variances(links, work_var);
  const double eps = slack(links);
  if (eps <= kTolerance) throw BoundError("B1 is undefined without positive slack");
  double sum = 0.0;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (!has_excess(links[i])) continue;
    const double d = links[i].work_rate() - 1.0 / static_cast<double>(links[i].delta);
    sum += eps * d + work_var[i] - d * d;
  }
  return sum / (2.0 * eps * eps);
}

std::uint64_t frame_lcm(std::span<const LinkSpec> links) {
  std::uint64_t acc = 1;
  for (const LinkSpec& l : links) {
    const auto d = static_cast<std::uint64_t>(l.delta);
    const std::uint64_t step = d / std::gcd(acc, d);
    if (acc > std::numeric_limits<std::uint64_t>::max() / step)
      throw BoundError("lcm of the frame lengths overflows 64 bits; use fewer distinct deltas");
    acc *= step;
  }
  return acc;
}

double bound_B(std::span<const LinkSpec> links, double h, std::span<const double> work_var) {
  if (!(h > 0.0)) throw ConfigError("h must be > 0");
  const double b1 = bound_B1(links, work_var);
  const double t0 = static_cast<double>(frame_lcm(links));
  const double load = frequency_load(links);
  double tail = 0.0;
  for (const LinkSpec& l : links) tail += load * l.work_rate() * t0;
  return static_cast<double>(links.size()) + h * b1 + tail;
}

double bound_B3(std::span<const LinkSpec> links, std::span<const double> arrival_var) {
  check_variances(links, arrival_var);
  const double eps = slack(links);
  if (eps < -kTolerance) throw BoundError("B3 is undefined when the deltas are infeasible");
  if (eps <= kTolerance) {
    double s = 0.0;
    for (const LinkSpec& l : links) {
      const double d = static_cast<double>(l.delta);
      s += std::min(l.work_rate(), 1.0 / d) * (1.0 + d) / 2.0;
    }
    return s;
  }
  const double n = static_cast<double>(links.size());
  double excess_links = 0.0;
  double var_sum = 0.0;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (!has_excess(links[i])) continue;
    excess_links += 1.0;
    const double scale = links[i].service_scale();
    var_sum += arrival_var[i] / (scale * scale);
  }
  return (n + 1.0) / 2.0 + excess_links / 8.0 + var_sum / (2.0 * eps * eps);
}

BoundReport compute_bounds(std::span<const LinkSpec> links, std::span<const double> arrival_var,
                           double h) {
  validate_links(links);
  check_variances(links, arrival_var);
  BoundReport r;
  r.freq_feasible = check_frequency_feasibility(links);
  r.supportable = check_supportability(links);
  r.epsilon = slack(links);
  r.h = h;
  r.mw_queue_bound = mw_queue_bound(links, arrival_var);
  const std::vector<double> wv = work_variances(links, arrival_var);
  try {
    r.T0 = frame_lcm(links);
  } catch (const BoundError&) {
  }
  if (r.freq_feasible && !links.empty()) {
    r.capacity_ratio_bound = capacity_ratio_bound(links);
    r.capacity_ratio_unrelaxed = capacity_ratio_unrelaxed(links);
    r.B3 = bound_B3(links, arrival_var);
  }
  if (r.epsilon > kTolerance) {
    r.B1 = bound_B1(links, wv);
    if (r.T0) r.B = bound_B(links, h, wv);
  }
  return r;
}

namespace {

void put(std::ostream& out, const char* key, const std::optional<double>& v) {
  out << key << '=';
  if (v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", *v);
    out << buf;
  } else {
    out << "n/a";
  }
  out << '\n';
}

}  // namespace

void write_bound_report(std::ostream& out, const BoundReport& r) {
  out << "freq_feasible=" << (r.freq_feasible ? "true" : "false") << '\n';
  out << "supportable=" << (r.supportable ? "true" : "false") << '\n';
  put(out, "epsilon", r.epsilon);
  put(out, "capacity_ratio_bound", r.capacity_ratio_bound);
  put(out, "capacity_ratio_unrelaxed", r.capacity_ratio_unrelaxed);
  put(out, "B1", r.B1);
  put(out, "h", r.h);
  put(out, "B", r.B);
  put(out, "B3", r.B3);
  put(out, "mw_queue_bound", r.mw_queue_bound);
  out << "T0=";
  if (r.T0)
    out << *r.T0;
  else
    out << "n/a";
  out << '\n';
}

}  // namespace msmw
