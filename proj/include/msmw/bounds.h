// Closed-form feasibility, capacity and backlog bounds for a link set with
// service-frequency constraints.
//
// Notation used below: slack = 1 - sum_i 1/delta_i, work rate k_i =
// lambda_i / (r_i c_i), excess e_i = max(k_i - 1/delta_i, 0).

#ifndef MSMW_BOUNDS_H_
#define MSMW_BOUNDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>

#include "msmw/model.h"

namespace msmw {

class BoundError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

double frequency_load(std::span<const LinkSpec> links);  // sum_i 1/delta_i
double slack(std::span<const LinkSpec> links);           // 1 - frequency_load

// sum_i 1/delta_i <= 1, with kTolerance at the boundary.
bool check_frequency_feasibility(std::span<const LinkSpec> links);

// sum_i e_i < slack, with kTolerance slack on the strict inequality.
bool check_supportability(std::span<const LinkSpec> links);

// Volume of {x in R^n : x >= 0, sum x <= beta} = beta^n / n!.
double simplex_volume(int n, double beta);

// Upper bound on |constrained region| / |unconstrained region|:
//   N! * sum_{t=0..N} C(N,t) slack^t / t! * (1/delta_min)^(N-t),
// accumulated in the log domain. Throws BoundError if infeasible.
double capacity_ratio_bound(std::span<const LinkSpec> links);

// The same sum before 1/delta_j is relaxed to 1/delta_min:
//   N! * sum_t slack^t / t! * e_{N-t}(1/delta_1, .., 1/delta_N),
// with e_k the elementary symmetric polynomial. At zero slack this is
// N! * prod_i 1/delta_i.
double capacity_ratio_unrelaxed(std::span<const LinkSpec> links);

// sum_i (lambda_i + Var[A_i] - lambda_i^2) / 2.
double mw_queue_bound(std::span<const LinkSpec> links, std::span<const double> arrival_var);

// Var(A_i / (r_i c_i)) from Var(A_i).
std::vector<double> work_variances(std::span<const LinkSpec> links,
                                   std::span<const double> arrival_var);

// 1/(2 slack^2) * sum_{e_i > 0} [slack e_i + Var(A_i/(r_i c_i)) - e_i^2].
// Takes work variances. Throws BoundError when slack <= 0.
double bound_B1(std::span<const LinkSpec> links, std::span<const double> work_var);

// lcm of all delta_i; throws BoundError on 64-bit overflow.
std::uint64_t frame_lcm(std::span<const LinkSpec> links);

// N + h B1 + sum_i (sum_j 1/delta_j) k_i T0. Takes work variances.
double bound_B(std::span<const LinkSpec> links, double h, std::span<const double> work_var);

// Long-run average total backlog bound under MSMW. Takes Var(A_i).
//   slack > 0: (N+1)/2 + N'/8 + 1/(2 slack^2) sum_{i in L'} Var(A_i)/(r_i c_i)^2
//   slack = 0: sum_i min(k_i, 1/delta_i) (1 + delta_i) / 2
// where L' = {i : k_i > 1/delta_i} and N' = |L'|. Throws BoundError if
// slack < 0.
double bound_B3(std::span<const LinkSpec> links, std::span<const double> arrival_var);

struct BoundReport {
  bool freq_feasible = false;
  bool supportable = false;
  double epsilon = 0.0;
  std::optional<double> capacity_ratio_bound;
  std::optional<double> capacity_ratio_unrelaxed;
  std::optional<double> B1;
  std::optional<double> B;
  double h = 1.0;
  std::optional<double> B3;
  double mw_queue_bound = 0.0;
  std::optional<std::uint64_t> T0;
};

// Evaluates every bound; entries whose preconditions fail are left empty.
BoundReport compute_bounds(std::span<const LinkSpec> links, std::span<const double> arrival_var,
                           double h = 1.0);

// key=value lines, one per field, "n/a" for empty entries.
void write_bound_report(std::ostream& out, const BoundReport& report);

}  // namespace msmw

#endif  // MSMW_BOUNDS_H_
