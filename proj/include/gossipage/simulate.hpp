#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gossipage/model.hpp"

namespace gossipage::sim {

struct SimConfig {
  double horizon = 1e5;
  double warmup = -1.0;  // negative: use horizon/10
  int replications = 20;
  std::uint64_t master_seed = 0x676f73736970ull;
  int threads = 0;          // 0: hardware concurrency
  std::string trace_path;   // non-empty: dump replication 0's events
};

// Versions held by every node; version[0] is the source counter N_s.
struct SimState {
  std::vector<std::uint64_t> version;
  double clock = 0.0;

  static SimState initial(const model::RateGraph& graph) {
    SimState s;
    s.version.assign(graph.node_count, 0);
    return s;
  }
  std::uint64_t source_version() const { return version[0]; }
  // Version age of node id at the current instant.
  std::uint64_t age(std::uint32_t id) const { return version[0] - version[id]; }
};

// Event index -1 is the source generating a new version; 0..edges-1 deliver
// along that edge. Gossip merges by min-age; feed edges copy the feeder's
// version (equal to the min-age merge on every graph built here).
constexpr std::int64_t kSourceEvent = -1;
void step(SimState& state, const model::RateGraph& graph, std::int64_t event);

struct TierEstimate {
  double mean_age = 0.0;
  double std_err = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct SimEstimate {
  // End-user (deepest tier) summary, replication-averaged.
  double mean_age = 0.0;
  double std_err = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::vector<TierEstimate> tiers;  // tiers[0] = heads / level 1, ...
  std::uint64_t events = 0;         // across all replications
  int replications = 0;

  bool covers(double value) const { return ci_lo <= value && value <= ci_hi; }
};

// Runs independent replications of the continuous-time process and returns
// per-tier time-averaged version ages over [warmup, horizon] with a 95%
// across-replication confidence interval. Deterministic in (graph, config).
SimEstimate simulate(const model::RateGraph& graph, const SimConfig& config);

}  // namespace gossipage::sim
