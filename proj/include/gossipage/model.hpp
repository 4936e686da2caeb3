#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gossipage/errors.hpp"

namespace gossipage::model {

enum class ClusterTopology : int {
  Disconnected = 0,
  UniRing = 1,
  BiRing = 2,
  FullyConnected = 3,
};

enum class HeadTopology : int {
  Disconnected = 0,
  Ring = 1,
};

const char* to_string(ClusterTopology t);
const char* to_string(HeadTopology t);

// Poisson rates of a scenario. Fields a scenario does not use stay empty.
//
//   lambda_e   source self-update rate (new versions per unit time)
//   lambda_s   total source fan-out rate
//   lambda_c   total per-head fan-out (heads not gossiping)
//   lambda_ca  per-head budget spent on the head ring
//   lambda_cb  per-head budget spent on its own cluster
//   lambda     total per-node gossip budget
//   lambda_a   same-level share of lambda in a hierarchy
//   lambda_b   child-feed share of lambda in a hierarchy
struct RateParams {
  std::optional<double> lambda_e;
  std::optional<double> lambda_s;
  std::optional<double> lambda_c;
  std::optional<double> lambda_ca;
  std::optional<double> lambda_cb;
  std::optional<double> lambda;
  std::optional<double> lambda_a;
  std::optional<double> lambda_b;
};

// n users split into m clusters of k users each, one head per cluster.
struct FlatNetworkSpec {
  long long n = 0;
  long long m = 0;
  long long k = 0;
  ClusterTopology cluster_topology = ClusterTopology::Disconnected;
  HeadTopology head_topology = HeadTopology::Disconnected;
  RateParams rates;
};

// h nested levels of ring clusters; level i holds prod_{j<=i} k_j nodes
// grouped into clusters of k_i. No dedicated heads: each node parents one
// cluster on the next level.
struct HierarchicalSpec {
  std::vector<long long> k_levels;  // k_1..k_h
  RateParams rates;
  std::optional<long long> n;  // cross-checked against the level sum when set

  long long h() const { return static_cast<long long>(k_levels.size()); }
  long long node_count() const;
};

// Feed edges point down the feeder lineage (source->head, head->user,
// parent->child); the receiver can never be fresher than the sender.
// Gossip edges join peers and merge by min-age.
enum class EdgeKind : std::uint8_t { Feed, Gossip };

struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  double rate = 0.0;
  EdgeKind kind = EdgeKind::Feed;
};

// Directed update channels of one scenario. Node 0 is the source; the
// remaining ids are dense and tiered: tier 1 = heads (or hierarchy level 1),
// deeper tiers follow in row-major cluster order.
struct RateGraph {
  double lambda_e = 0.0;
  std::uint32_t node_count = 0;
  std::vector<Edge> edges;
  std::vector<std::uint8_t> tier;         // per node; tier[0] == 0 (source)
  std::vector<std::uint32_t> tier_start;  // first node id of each tier

  std::uint8_t deepest_tier() const;
  double total_rate() const;  // lambda_e plus all edge rates
  std::string node_name(std::uint32_t id) const;
};

// Expected version ages of one scenario.
struct AgeReport {
  double head_age = 0.0;  // first tier below the source
  double user_age = 0.0;  // end users (deepest tier)
  std::vector<double> cluster_profile;  // contiguous-subset ages, size 1..k
  std::vector<double> per_level;        // hierarchies: one age per level
};

void validate_spec(const FlatNetworkSpec& spec);
void validate_spec(const HierarchicalSpec& spec);

RateGraph build_flat_graph(const FlatNetworkSpec& spec);
RateGraph build_hierarchical_graph(const HierarchicalSpec& spec);

}  // namespace gossipage::model
