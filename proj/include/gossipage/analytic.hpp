#pragma once

#include <cstdint>
#include <vector>

#include "gossipage/model.hpp"

namespace gossipage::analytic {

// Expected min-ages of contiguous subsets inside one cluster.
// values[j-1] is the age of a subset of j adjacent nodes; values[0] is a
// single node, values[k-1] the whole cluster.
struct AgeProfile {
  std::vector<double> values;
  double feeder_age = 0.0;

  double single() const { return values.front(); }
  double full() const { return values.back(); }
};

// Expected min-age of every non-empty node subset of one cluster, indexed by
// bitmask over the k users.
struct SubsetAgeTable {
  int cluster_size = 0;
  std::vector<double> ages;  // size 2^k; ages[0] is unused

  double at(std::uint32_t subset_mask) const { return ages[subset_mask]; }
  double single(int node) const { return ages[1u << node]; }
  double full() const { return ages[ages.size() - 1]; }
};

// Arbitrary intra-cluster update channels: rate(i,j) is the Poisson rate at
// which user i pushes its version to user j.
struct ClusterGraph {
  int k = 0;
  std::vector<double> rates;  // k*k row-major

  double rate(int i, int j) const { return rates[static_cast<size_t>(i) * k + j]; }
  double& rate(int i, int j) { return rates[static_cast<size_t>(i) * k + j]; }

  static ClusterGraph empty(int k) { return {k, std::vector<double>(size_t(k) * k, 0.0)}; }
};

// Age of one cluster head when heads do not gossip: m * lambda_e / lambda_s.
double head_age_isolated(long long m, double lambda_e, double lambda_s);

// Additive two-hop age of a disconnected cluster's user:
// m*lambda_e/lambda_s + k*lambda_e/lambda_c.
double disconnected_solve(long long m, long long k, double lambda_e,
                          double lambda_s, double lambda_c);

// Ring-cluster recursion over contiguous subsets. The cluster of k nodes is
// fed `feed_rate` in total (feed_rate/k per node) by a feeder of the given
// age; `gossip_rate` is the total neighbor in-rate of a contiguous subset,
// which is the per-node budget lambda for both ring directions.
AgeProfile chain_solve(long long k, double lambda_e, double feeder_age,
                       double feed_rate, double gossip_rate);

// Fully connected counterpart: a subset of j nodes hears from its k-j
// outside peers at rate j*(k-j)*gossip_rate/(k-1).
AgeProfile fully_connected_solve(long long k, double lambda_e, double feeder_age,
                                 double feed_rate, double gossip_rate);

// Unrolled form of the ring recursion; matches chain_solve(...).single()
// to round-off. lambda_c is the total feed into the cluster, lambda the
// gossip budget.
double closed_form_ring(long long k, double lambda_e, double lambda_c,
                        double lambda, double feeder_age, double full_set_age);

// Single bi-directional ring of n nodes fed directly by the source at total
// rate lambda (no cluster heads).
double yates_ring_closed_form(long long n, double lambda_e, double lambda);

// Brute-force evaluation of the subset recursion for one cluster with
// arbitrary intra-cluster channels. head_feed[i] is the feeder's rate into
// user i. Capped at k <= 20 (the table holds 2^k entries).
SubsetAgeTable subset_oracle(const ClusterGraph& cluster, const std::vector<double>& head_feed,
                             double feeder_age, double lambda_e);

model::AgeReport solve_flat(const model::FlatNetworkSpec& spec);
model::AgeReport solve_hierarchical(const model::HierarchicalSpec& spec);

// sum_{i=1}^{k-1} prod_{j=1}^{i} 1/(1 + (j/k)*ratio)  and the final product.
// Runs in log space for large k; the products decay like exp(-ratio*i^2/2k).
struct ProductSums {
  double sum = 0.0;
  double last = 0.0;
};
ProductSums ring_product_sums(long long k, double ratio);

}  // namespace gossipage::analytic
