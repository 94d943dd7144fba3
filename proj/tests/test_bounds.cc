#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "msmw/bounds.h"

using namespace msmw;

namespace {

std::vector<LinkSpec> links_of(std::initializer_list<std::pair<double, int>> kd) {
  std::vector<LinkSpec> out;
  for (auto [k, d] : kd) out.push_back(LinkSpec{k, 1.0, 1.0, d});
  return out;
}

const std::vector<LinkSpec> kWorked = links_of({{0.5, 2}, {0.125, 4}});

// Direct, non-logarithmic expansion of the capacity-ratio sum.
double ratio_direct(const std::vector<int>& deltas) {
  const int n = static_cast<int>(deltas.size());
  double load = 0.0;
  for (int d : deltas) load += 1.0 / d;
  const double eps = 1.0 - load;
  const double inv_min = 1.0 / *std::min_element(deltas.begin(), deltas.end());
  double sum = 0.0;
  for (int t = 0; t <= n; ++t) {
    double binom = 1.0;
    for (int j = 1; j <= t; ++j) binom = binom * (n - t + j) / j;
    sum += binom * std::pow(eps, t) / std::tgamma(t + 1.0) * std::pow(inv_min, n - t);
  }
  return std::tgamma(n + 1.0) * sum;
}

double simplex_monte_carlo(int n, double beta, int samples, Rng& rng) {
  int inside = 0;
  for (int s = 0; s < samples; ++s) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += beta * unit_uniform(rng);
    if (sum <= beta) ++inside;
  }
  return std::pow(beta, n) * inside / samples;
}

}  // namespace

TEST_CASE("frequency feasibility") {
  CHECK(check_frequency_feasibility(links_of({{0, 2}, {0, 4}})));
  CHECK_FALSE(check_frequency_feasibility(links_of({{0, 2}, {0, 2}, {0, 2}})));
  for (int n : {1, 3, 7, 10}) {
    std::vector<LinkSpec> tight(static_cast<std::size_t>(n), LinkSpec{0, 1, 1, n});
    CHECK(check_frequency_feasibility(tight));
  }
  CHECK(frequency_load(kWorked) == 0.75);
  CHECK(slack(kWorked) == 0.25);
}

TEST_CASE("supportability") {
  CHECK(check_supportability(kWorked));
  CHECK(check_supportability(links_of({{0, 3}, {0, 3}})));
  CHECK_FALSE(check_supportability(links_of({{1.0, 1}})));

  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<LinkSpec> l;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) l.push_back({unit_uniform(rng), 1, 1, 1 + static_cast<int>(rng() % 12)});
    if (check_supportability(l)) REQUIRE(check_frequency_feasibility(l));
  }
}

TEST_CASE("simplex_volume") {
  CHECK(simplex_volume(1, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(simplex_volume(2, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(simplex_volume(3, 1.0) == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(simplex_volume(3, 2.0) == doctest::Approx(8.0 / 6).epsilon(1e-12));
  Rng rng(17);
  const double mc = simplex_monte_carlo(4, 0.5, 1'000'000, rng);
  CHECK(std::abs(simplex_volume(4, 0.5) - mc) / mc < 0.02);
  CHECK_THROWS(simplex_volume(0, 1.0));
}

TEST_CASE("capacity_ratio_bound") {
  CHECK(capacity_ratio_bound(links_of({{0, 2}})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(capacity_ratio_bound(links_of({{0, 4}, {0, 4}})) == doctest::Approx(0.875).epsilon(1e-12));
  const std::vector<LinkSpec> loose(5, LinkSpec{0, 1, 1, 1'000'000});
  CHECK(std::abs(capacity_ratio_bound(loose) - 1.0) < 1e-3);
  CHECK_THROWS_AS(capacity_ratio_bound(links_of({{0, 1}, {0, 2}})), BoundError);

  SUBCASE("matches a direct expansion") {
    for (const std::vector<int>& d : std::vector<std::vector<int>>{
             {3, 7}, {5, 5, 9}, {4, 8, 16, 32}, {10, 10, 10, 10, 10}, {2, 6, 12, 40}}) {
      std::vector<LinkSpec> l;
      for (int x : d) l.push_back({0, 1, 1, x});
      CHECK(capacity_ratio_bound(l) == doctest::Approx(ratio_direct(d)).epsilon(1e-10));
    }
  }
  SUBCASE("non-decreasing in the slack at a fixed smallest delta") {
    double prev = 0.0;
    for (int d = 4; d <= 200; ++d) {
      const double v = capacity_ratio_bound(links_of({{0, 4}, {0, d}, {0, d}}));
      REQUIRE(v >= prev - 1e-12);
      prev = v;
    }
  }
  SUBCASE("the unrelaxed sum never exceeds the relaxed one") {
    Rng rng(8);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<LinkSpec> l;
      const int n = 1 + static_cast<int>(rng() % 6);
      for (int i = 0; i < n; ++i) l.push_back({0, 1, 1, n + static_cast<int>(rng() % 20)});
      REQUIRE(capacity_ratio_unrelaxed(l) <= capacity_ratio_bound(l) * (1 + 1e-12));
    }
  }
  SUBCASE("at zero slack the unrelaxed sum is N! times the product of 1/delta") {
    CHECK(capacity_ratio_unrelaxed(links_of({{0, 3}, {0, 3}, {0, 3}})) ==
          doctest::Approx(6.0 / 27).epsilon(1e-12));
    CHECK(capacity_ratio_unrelaxed(links_of({{0, 2}, {0, 4}, {0, 4}})) ==
          doctest::Approx(6.0 / 32).epsilon(1e-12));
  }
}

TEST_CASE("mw_queue_bound") {
  CHECK(mw_queue_bound(links_of({{0, 2}, {0, 3}}), std::vector<double>{0, 0}) == 0.0);
  CHECK(mw_queue_bound(links_of({{0.5, 2}}), std::vector<double>{0.25}) == doctest::Approx(0.25));
}

TEST_CASE("bound_B1 and bound_B") {
  CHECK(bound_B1(kWorked, std::vector<double>{0, 0}) == 0.0);
  CHECK(bound_B1(links_of({{0.6, 2}}), std::vector<double>{0.02}) == doctest::Approx(0.12));
  CHECK_THROWS_AS(bound_B1(links_of({{0.1, 2}, {0.1, 2}}), std::vector<double>{0, 0}), BoundError);

  CHECK(frame_lcm(kWorked) == 4);
  CHECK(frame_lcm(links_of({{0, 6}, {0, 4}, {0, 10}})) == 60);
  CHECK(bound_B(links_of({{0, 3}, {0, 5}, {0, 7}}), 1.0, std::vector<double>{0, 0, 0}) == 3.0);
  CHECK(bound_B(kWorked, 1.0, std::vector<double>{0, 0}) == doctest::Approx(3.875));
  CHECK_THROWS_AS(frame_lcm(links_of({{0, 1000003}, {0, 1000033}, {0, 1000037}, {0, 1000039}})),
                  BoundError);

  const auto wv = work_variances(std::vector<LinkSpec>{{0.5, 2, 0.5, 4}}, std::vector<double>{0.25});
  CHECK(wv[0] == 0.25);
}

TEST_CASE("bound_B3") {
  CHECK(bound_B3(kWorked, std::vector<double>{0.25, 0.109375}) == doctest::Approx(1.5));
  CHECK(bound_B3(links_of({{0.1, 4}, {0.1, 4}, {0.05, 8}}), std::vector<double>{0.09, 0.09, 0.05}) ==
        doctest::Approx(2.0));
  for (int n : {1, 2, 4, 7}) {
    std::vector<LinkSpec> tight(static_cast<std::size_t>(n), LinkSpec{1.5 / n, 1, 1, n});
    std::vector<double> var(static_cast<std::size_t>(n), 0.1);
    CHECK(bound_B3(tight, var) == doctest::Approx((1.0 + n) / 2));
  }
  // One excess link: (N+1)/2 + 1/8 + Var/(2 eps^2).
  CHECK(bound_B3(links_of({{0.6, 2}}), std::vector<double>{0.24}) ==
        doctest::Approx(1.0 + 0.125 + 0.24 / 0.5));
  CHECK_THROWS_AS(bound_B3(links_of({{0, 1}, {0, 1}}), std::vector<double>{0, 0}), BoundError);
}

TEST_CASE("bound report") {
  const BoundReport r = compute_bounds(kWorked, std::vector<double>{0, 0}, 1.0);
  CHECK(r.freq_feasible);
  CHECK(r.supportable);
  CHECK(*r.T0 == 4);
  CHECK(*r.B == doctest::Approx(3.875));
  std::ostringstream out;
  write_bound_report(out, r);
  CHECK(out.str().find("B3=1.5\n") != std::string::npos);

  const BoundReport bad = compute_bounds(links_of({{0, 1}, {0, 1}}), std::vector<double>{0, 0});
  CHECK_FALSE(bad.freq_feasible);
  CHECK_FALSE(bad.B3.has_value());
  std::ostringstream o2;
  write_bound_report(o2, bad);
  CHECK(o2.str().find("B3=n/a") != std::string::npos);
}
