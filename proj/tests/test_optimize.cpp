#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "gossipage/analytic.hpp"
#include "gossipage/optimize.hpp"

using namespace gossipage;
using namespace gossipage::optimize;

namespace {

model::RateParams flat_rates(double le, double ls, double lc, double lam) {
  model::RateParams r;
  r.lambda_e = le;
  r.lambda_s = ls;
  r.lambda_c = lc;
  r.lambda = lam;
  return r;
}

model::RateParams table3_rates(double la, double lb) {
  model::RateParams r;
  r.lambda_e = 1;
  r.lambda_s = 1;
  r.lambda = la + lb;
  r.lambda_a = la;
  r.lambda_b = lb;
  return r;
}

}  // namespace

TEST_CASE("sweep covers exactly the divisors of n") {
  auto result = sweep_cluster_size(120, flat_rates(1, 1, 1, 1),
                                   model::ClusterTopology::Disconnected,
                                   model::HeadTopology::Disconnected);
  CHECK(result.rows.size() == 16);  // d(120)
  long long prev = 0;
  for (const SweepRow& row : result.rows) {
    CHECK(row.k > prev);
    prev = row.k;
    CHECK(row.m * row.k == 120);
    CHECK(row.user_age > 0.0);
  }
}

TEST_CASE("sweep: unit rates give the tied disconnected optimum") {
  auto result = sweep_cluster_size(120, flat_rates(1, 1, 1, 1),
                                   model::ClusterTopology::Disconnected,
                                   model::HeadTopology::Disconnected);
  CHECK(result.argmin_k == std::vector<long long>{10, 12});
  CHECK(result.min_age == doctest::Approx(22.0).epsilon(1e-12));
}

TEST_CASE("sweep: fig4c ring clusters bottom out at k=15") {
  auto result = sweep_cluster_size(120, flat_rates(1, 10, 10, 1),
                                   model::ClusterTopology::BiRing,
                                   model::HeadTopology::Disconnected);
  CHECK(result.argmin_k == std::vector<long long>{15});
  CHECK(result.min_age == doctest::Approx(1.7729).epsilon(5e-4 / 1.7729));
}

TEST_CASE("sweep: fig4d disconnected tie at {3,4} with age 7") {
  auto result = sweep_cluster_size(120, flat_rates(1, 10, 1, 2),
                                   model::ClusterTopology::Disconnected,
                                   model::HeadTopology::Disconnected);
  CHECK(result.argmin_k == std::vector<long long>{3, 4});
  CHECK(result.min_age == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("more connectivity never raises the sweep age at any divisor") {
  for (const char* preset : {"fig4a", "fig4b", "fig4c"}) {
    model::RateParams rates = flat_rates(1, 1, 1, 1);
    if (std::string(preset) == "fig4b") rates = flat_rates(1, 10, 1, 1);
    if (std::string(preset) == "fig4c") rates = flat_rates(1, 10, 10, 1);
    auto disc = sweep_cluster_size(120, rates, model::ClusterTopology::Disconnected,
                                   model::HeadTopology::Disconnected);
    auto ring = sweep_cluster_size(120, rates, model::ClusterTopology::BiRing,
                                   model::HeadTopology::Disconnected);
    auto full = sweep_cluster_size(120, rates, model::ClusterTopology::FullyConnected,
                                   model::HeadTopology::Disconnected);
    REQUIRE(disc.rows.size() == ring.rows.size());
    REQUIRE(ring.rows.size() == full.rows.size());
    for (size_t i = 0; i < disc.rows.size(); ++i) {
      CHECK(full.rows[i].user_age <= ring.rows[i].user_age + 1e-12);
      CHECK(ring.rows[i].user_age <= disc.rows[i].user_age + 1e-12);
    }
  }
}

TEST_CASE("kkt_rate_split closed forms") {
  auto symmetric = kkt_rate_split(10, 1, 1);
  CHECK(symmetric.lambda_ca == doctest::Approx(5.0));
  CHECK(symmetric.lambda_cb == doctest::Approx(5.0));

  auto cube = kkt_rate_split(9, 8, 1);
  CHECK(cube.lambda_ca == doctest::Approx(3.0));
  CHECK(cube.lambda_cb == doctest::Approx(6.0));

  auto skew = kkt_rate_split(10, 10, 1);
  CHECK(skew.lambda_ca == doctest::Approx(3.1701).epsilon(1e-4 / 3.1701));
  CHECK(skew.lambda_cb == doctest::Approx(6.8299).epsilon(1e-4 / 6.8299));
}

TEST_CASE("kkt split is stationary for the age objective") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rate(0.2, 12.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double lc = rate(rng), ls = rate(rng), lam = rate(rng);
    auto split = kkt_rate_split(lc, ls, lam);
    CHECK(split.lambda_ca > 0.0);
    CHECK(split.lambda_cb > 0.0);
    CHECK(split.lambda_ca + split.lambda_cb == doctest::Approx(lc).epsilon(1e-12));
    auto objective = [&](double x) {
      return 1.0 / std::sqrt(ls * x) + 1.0 / std::sqrt(lam * (lc - x));
    };
    const double h = 1e-6 * lc;
    const double left = objective(split.lambda_ca - h);
    const double mid = objective(split.lambda_ca);
    const double right = objective(split.lambda_ca + h);
    CHECK(mid <= left + 1e-12);
    CHECK(mid <= right + 1e-12);
  }
}

TEST_CASE("numeric_rate_split agrees with the closed form") {
  auto symmetric = numeric_rate_split(10, 1, 1);
  CHECK(symmetric.lambda_ca == doctest::Approx(5.0).epsilon(1e-6));
  auto cube = numeric_rate_split(9, 8, 1);
  CHECK(cube.lambda_ca == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(cube.lambda_cb == doctest::Approx(6.0).epsilon(1e-6));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rate(0.2, 12.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double lc = rate(rng), ls = rate(rng), lam = rate(rng);
    auto closed = kkt_rate_split(lc, ls, lam);
    auto numeric = numeric_rate_split(lc, ls, lam);
    CHECK(std::abs(closed.lambda_ca - numeric.lambda_ca) <= 1e-6);
    CHECK(std::abs(closed.lambda_cb - numeric.lambda_cb) <= 1e-6);
  }
}

TEST_CASE("hierarchy_search enumerates exactly the feasible tuples") {
  auto result = hierarchy_search(120, 3, table3_rates(2, 3));

  // Independent brute force over all triples.
  std::set<std::vector<long long>> expected;
  for (long long k1 = 1; k1 <= 120; ++k1) {
    for (long long k2 = 1; k2 <= 120; ++k2) {
      for (long long k3 = 1; k3 <= 120; ++k3) {
        if (k1 + k1 * k2 + k1 * k2 * k3 == 120) expected.insert({k1, k2, k3});
      }
    }
  }
  std::set<std::vector<long long>> got;
  for (const SearchRow& row : result.table) got.insert(row.k_levels);
  CHECK(got == expected);
  CHECK(got.count({3, 13, 2}) == 1);
  CHECK(got.count({3, 3, 12}) == 1);
  CHECK(got.count({8, 7, 1}) == 1);
}

TEST_CASE("hierarchy_search table is sorted and the best age re-evaluates") {
  auto result = hierarchy_search(120, 3, table3_rates(2, 3));
  for (size_t i = 1; i < result.table.size(); ++i) {
    CHECK(result.table[i - 1].age <= result.table[i].age + 1e-15);
  }
  REQUIRE(!result.best.empty());
  model::HierarchicalSpec best;
  best.k_levels = result.best.front();
  best.rates = table3_rates(2, 3);
  CHECK(analytic::solve_hierarchical(best).user_age ==
        doctest::Approx(result.min_age).epsilon(1e-12));
}

TEST_CASE("hierarchy_search trivial and infeasible instances") {
  auto tiny = hierarchy_search(2, 1, table3_rates(2, 3));
  REQUIRE(tiny.best.size() == 1);
  CHECK(tiny.best.front() == std::vector<long long>{2});

  CHECK_THROWS_AS(hierarchy_search(2, 3, table3_rates(2, 3)), EvalError);
}

TEST_CASE("hierarchy_search objectives differ but rank sanely") {
  auto exact = hierarchy_search(120, 3, table3_rates(2, 3), SearchObjective::Exact);
  auto approx = hierarchy_search(120, 3, table3_rates(2, 3), SearchObjective::Approx);
  CHECK(exact.table.size() == approx.table.size());
  CHECK(exact.min_age < approx.min_age);  // the approximation overshoots here
}
