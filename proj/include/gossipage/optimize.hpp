#pragma once

#include <vector>

#include "gossipage/model.hpp"
#include "gossipage/simulate.hpp"

namespace gossipage::optimize {

struct SweepRow {
  long long k = 0;
  long long m = 0;
  double head_age = 0.0;
  double user_age = 0.0;
  model::ClusterTopology cluster_topology = model::ClusterTopology::Disconnected;
  model::HeadTopology head_topology = model::HeadTopology::Disconnected;
};

struct SweepResult {
  std::vector<SweepRow> rows;        // one per divisor k of n, ascending
  std::vector<long long> argmin_k;   // every k within 1e-9 of the minimum
  double min_age = 0.0;
};

// Exact user age for every cluster size k dividing n (m = n/k).
SweepResult sweep_cluster_size(long long n, const model::RateParams& rates,
                               model::ClusterTopology cluster_topology,
                               model::HeadTopology head_topology);

struct RateSplit {
  double lambda_ca = 0.0;
  double lambda_cb = 0.0;
};

// Closed-form optimum of the head budget split: the head-ring share is
// proportional to lambda^(1/3), the cluster share to lambda_s^(1/3).
RateSplit kkt_rate_split(double lambda_c, double lambda_s, double lambda);

// Golden-section minimization of 1/sqrt(lambda_s*x) + 1/sqrt(lambda*(lambda_c-x));
// independent numeric check of the closed form.
RateSplit numeric_rate_split(double lambda_c, double lambda_s, double lambda);

enum class SearchObjective : int { Exact = 0, Approx = 1, Simulate = 2 };

struct SearchRow {
  std::vector<long long> k_levels;
  double age = 0.0;
};

struct SearchResult {
  std::vector<SearchRow> table;  // every feasible tuple, sorted by age
  std::vector<std::vector<long long>> best;
  double min_age = 0.0;
};

// Enumerates every level-size tuple (k_1..k_h) whose node count is exactly n
// and scores it with the chosen objective. sim_config applies only to the
// Simulate objective (defaults used when null).
SearchResult hierarchy_search(long long n, long long h,
                              const model::RateParams& rates,
                              SearchObjective objective = SearchObjective::Exact,
                              const sim::SimConfig* sim_config = nullptr);

}  // namespace gossipage::optimize
