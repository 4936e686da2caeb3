#include "gossipage/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "gossipage/analytic.hpp"
#include "gossipage/asymptotics.hpp"

namespace gossipage::optimize {

namespace {

constexpr double kTieTolerance = 1e-9;

void require_rate(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw SpecError(SpecErrorCode::NonPositiveRate,
                    std::string(name) + " must be strictly positive and finite");
  }
}

std::vector<long long> divisors_ascending(long long n) {
  std::vector<long long> low, high;
  for (long long d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      low.push_back(d);
      if (d != n / d) high.push_back(n / d);
    }
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

}  // namespace

SweepResult sweep_cluster_size(long long n, const model::RateParams& rates,
                               model::ClusterTopology cluster_topology,
                               model::HeadTopology head_topology) {
  if (n < 1) throw SpecError(SpecErrorCode::BadCount, "n must be >= 1");
  SweepResult result;
  for (long long k : divisors_ascending(n)) {
    model::FlatNetworkSpec spec;
    spec.n = n;
    spec.m = n / k;
    spec.k = k;
    spec.cluster_topology = cluster_topology;
    spec.head_topology = head_topology;
    spec.rates = rates;
    const model::AgeReport report = analytic::solve_flat(spec);
    result.rows.push_back({k, spec.m, report.head_age, report.user_age,
                           cluster_topology, head_topology});
  }
  result.min_age = result.rows.front().user_age;
  for (const SweepRow& row : result.rows) {
    result.min_age = std::min(result.min_age, row.user_age);
  }
  for (const SweepRow& row : result.rows) {
    if (row.user_age <= result.min_age + kTieTolerance) {
      result.argmin_k.push_back(row.k);
    }
  }
  return result;
}

RateSplit kkt_rate_split(double lambda_c, double lambda_s, double lambda) {
  require_rate(lambda_c, "lambda_c");
  require_rate(lambda_s, "lambda_s");
  require_rate(lambda, "lambda");
  const double croot = std::cbrt(lambda);
  const double sroot = std::cbrt(lambda_s);
  RateSplit split;
  split.lambda_ca = lambda_c * croot / (croot + sroot);
  split.lambda_cb = lambda_c - split.lambda_ca;  // keeps the sum exact
  return split;
}

RateSplit numeric_rate_split(double lambda_c, double lambda_s, double lambda) {
  require_rate(lambda_c, "lambda_c");
  require_rate(lambda_s, "lambda_s");
  require_rate(lambda, "lambda");
  const auto objective = [&](double x) {
    return 1.0 / std::sqrt(lambda_s * x) +
           1.0 / std::sqrt(lambda * (lambda_c - x));
  };
  // The objective blows up at both ends, so the minimum is interior;
  // golden-section keeps a strict bracket.
  constexpr double inv_phi = 0.6180339887498949;
  double a = lambda_c * 1e-12;
  double b = lambda_c * (1.0 - 1e-12);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > 1e-8) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, lambda_c - x};
}

namespace {

void enumerate_tuples(long long n, long long h, std::vector<long long>& prefix,
                      long long prefix_product, long long prefix_sum,
                      std::vector<std::vector<long long>>& out) {
  const long long level = static_cast<long long>(prefix.size());
  if (level == h) {
    if (prefix_sum == n) out.push_back(prefix);
    return;
  }
  for (long long k = 1;; ++k) {
    const long long product = prefix_product * k;
    const long long sum = prefix_sum + product;
    // Remaining levels hold at least `product` nodes each.
    if (sum + (h - level - 1) * product > n) break;
    prefix.push_back(k);
    enumerate_tuples(n, h, prefix, product, sum, out);
    prefix.pop_back();
  }
}

}  // namespace

SearchResult hierarchy_search(long long n, long long h,
                              const model::RateParams& rates,
                              SearchObjective objective,
                              const sim::SimConfig* sim_config) {
  if (n < 1 || h < 1) throw SpecError(SpecErrorCode::BadCount, "n and h must be >= 1");
  std::vector<std::vector<long long>> tuples;
  std::vector<long long> prefix;
  enumerate_tuples(n, h, prefix, 1, 0, tuples);
  if (tuples.empty()) {
    throw EvalError(EvalErrorCode::NoFeasibleTuple,
                    "no level sizes sum to n = " + std::to_string(n));
  }

  sim::SimConfig sim_cfg;
  if (sim_config) {
    sim_cfg = *sim_config;
  } else {
    sim_cfg.horizon = 5e3;
    sim_cfg.warmup = 5e2;
    sim_cfg.replications = 10;
  }

  SearchResult result;
  result.table.reserve(tuples.size());
  for (const auto& k_levels : tuples) {
    model::HierarchicalSpec spec;
    spec.k_levels = k_levels;
    spec.rates = rates;
    spec.n = n;
    double age = 0.0;
    switch (objective) {
      case SearchObjective::Exact:
        age = analytic::solve_hierarchical(spec).user_age;
        break;
      case SearchObjective::Approx:
        age = asymptotics::approx_hierarchical(spec).back();
        break;
      case SearchObjective::Simulate:
        age = sim::simulate(model::build_hierarchical_graph(spec), sim_cfg).mean_age;
        break;
    }
    result.table.push_back({k_levels, age});
  }
  std::sort(result.table.begin(), result.table.end(),
            [](const SearchRow& a, const SearchRow& b) {
              if (a.age != b.age) return a.age < b.age;
              return a.k_levels < b.k_levels;
            });
  result.min_age = result.table.front().age;
  for (const SearchRow& row : result.table) {
    if (row.age <= result.min_age + kTieTolerance) {
      result.best.push_back(row.k_levels);
    }
  }
  return result;
}

}  // namespace gossipage::optimize
