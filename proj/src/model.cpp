#include "gossipage/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gossipage {

const char* to_string(SpecErrorCode code) {
  switch (code) {
    case SpecErrorCode::NonDivisible: return "NonDivisible";
    case SpecErrorCode::NonPositiveRate: return "NonPositiveRate";
    case SpecErrorCode::RateSplitMismatch: return "RateSplitMismatch";
    case SpecErrorCode::HierarchyCountMismatch: return "HierarchyCountMismatch";
    case SpecErrorCode::MissingRate: return "MissingRate";
    case SpecErrorCode::BadCount: return "BadCount";
  }
  return "SpecError";
}

const char* to_string(EvalErrorCode code) {
  switch (code) {
    case EvalErrorCode::ClusterTooLarge: return "ClusterTooLarge";
    case EvalErrorCode::UnreachableUser: return "UnreachableUser";
    case EvalErrorCode::UnsupportedRegime: return "UnsupportedRegime";
    case EvalErrorCode::DegenerateCurve: return "DegenerateCurve";
    case EvalErrorCode::ZeroTotalRate: return "ZeroTotalRate";
    case EvalErrorCode::HorizonTooShort: return "HorizonTooShort";
    case EvalErrorCode::NoFeasibleTuple: return "NoFeasibleTuple";
    case EvalErrorCode::UnknownEdge: return "UnknownEdge";
  }
  return "EvalError";
}

}  // namespace gossipage

namespace gossipage::model {

namespace {

constexpr double kSplitTolerance = 1e-9;

void check_positive(const std::optional<double>& rate, const char* name) {
  if (!rate) return;
  if (!(*rate > 0.0) || !std::isfinite(*rate)) {
    throw SpecError(SpecErrorCode::NonPositiveRate,
                    std::string(name) + " must be strictly positive and finite");
  }
}

double require(const std::optional<double>& rate, const char* name) {
  if (!rate) {
    throw SpecError(SpecErrorCode::MissingRate,
                    std::string(name) + " is required for this scenario");
  }
  return *rate;
}

void check_all_present_positive(const RateParams& r) {
  check_positive(r.lambda_e, "lambda_e");
  check_positive(r.lambda_s, "lambda_s");
  check_positive(r.lambda_c, "lambda_c");
  check_positive(r.lambda_ca, "lambda_ca");
  check_positive(r.lambda_cb, "lambda_cb");
  check_positive(r.lambda, "lambda");
  check_positive(r.lambda_a, "lambda_a");
  check_positive(r.lambda_b, "lambda_b");
}

}  // namespace

const char* to_string(ClusterTopology t) {
  switch (t) {
    case ClusterTopology::Disconnected: return "disconnected";
    case ClusterTopology::UniRing: return "uni-ring";
    case ClusterTopology::BiRing: return "ring";
    case ClusterTopology::FullyConnected: return "fully-connected";
  }
  return "?";
}

const char* to_string(HeadTopology t) {
  switch (t) {
    case HeadTopology::Disconnected: return "disconnected";
    case HeadTopology::Ring: return "ring";
  }
  return "?";
}

long long HierarchicalSpec::node_count() const {
  long long total = 0;
  long long prod = 1;
  for (long long k : k_levels) {
    if (k < 1) throw SpecError(SpecErrorCode::BadCount, "every k_i must be >= 1");
    if (prod > (1LL << 40) / std::max<long long>(k, 1)) {
      throw SpecError(SpecErrorCode::BadCount, "hierarchy is too large");
    }
    prod *= k;
    total += prod;
  }
  return total;
}

void validate_spec(const FlatNetworkSpec& spec) {
  if (spec.m < 1 || spec.k < 1) {
    throw SpecError(SpecErrorCode::BadCount, "m and k must be >= 1");
  }
  if (spec.n != spec.m * spec.k) {
    std::ostringstream msg;
    msg << "n = " << spec.n << " is not m*k = " << spec.m * spec.k;
    throw SpecError(SpecErrorCode::NonDivisible, msg.str());
  }
  check_all_present_positive(spec.rates);

  const RateParams& r = spec.rates;
  require(r.lambda_e, "lambda_e");
  require(r.lambda_s, "lambda_s");
  if (spec.head_topology == HeadTopology::Ring) {
    double ca = require(r.lambda_ca, "lambda_ca");
    double cb = require(r.lambda_cb, "lambda_cb");
    if (r.lambda_c && std::abs(ca + cb - *r.lambda_c) > kSplitTolerance) {
      throw SpecError(SpecErrorCode::RateSplitMismatch,
                      "lambda_ca + lambda_cb must equal lambda_c");
    }
  } else {
    require(r.lambda_c, "lambda_c");
  }
  if (spec.cluster_topology != ClusterTopology::Disconnected) {
    require(r.lambda, "lambda");
  }
}

void validate_spec(const HierarchicalSpec& spec) {
  if (spec.k_levels.empty()) {
    throw SpecError(SpecErrorCode::BadCount, "hierarchy needs at least one level");
  }
  long long total = spec.node_count();  // also checks k_i >= 1
  if (spec.n && *spec.n != total) {
    std::ostringstream msg;
    msg << "level sizes sum to " << total << " nodes, not n = " << *spec.n;
    throw SpecError(SpecErrorCode::HierarchyCountMismatch, msg.str());
  }
  check_all_present_positive(spec.rates);

  const RateParams& r = spec.rates;
  require(r.lambda_e, "lambda_e");
  require(r.lambda_s, "lambda_s");
  double lam = require(r.lambda, "lambda");
  if (spec.h() >= 2) {
    double a = require(r.lambda_a, "lambda_a");
    double b = require(r.lambda_b, "lambda_b");
    if (std::abs(a + b - lam) > kSplitTolerance) {
      throw SpecError(SpecErrorCode::RateSplitMismatch,
                      "lambda_a + lambda_b must equal lambda");
    }
  }
}

std::uint8_t RateGraph::deepest_tier() const {
  return tier.empty() ? 0 : tier.back();
}

double RateGraph::total_rate() const {
  double total = lambda_e;
  for (const Edge& e : edges) total += e.rate;
  return total;
}

std::string RateGraph::node_name(std::uint32_t id) const {
  if (id == 0) return "source";
  std::uint8_t t = tier[id];
  std::uint32_t offset = id - tier_start[t];
  // Cluster count on tier t equals the size of tier t-1 (one parent each);
  // tier 1 is a single cluster under the source.
  std::uint32_t clusters = 1;
  if (t >= 2) clusters = tier_start[t] - tier_start[t - 1];
  std::uint32_t tier_size =
      (static_cast<size_t>(t) + 1 < tier_start.size())
          ? tier_start[t + 1] - tier_start[t]
          : node_count - tier_start[t];
  std::uint32_t per_cluster = tier_size / clusters;
  std::ostringstream name;
  name << "L" << int(t) << "." << offset / per_cluster << "." << offset % per_cluster;
  return name.str();
}

namespace {

// Appends one cluster's ring edges. A 2-ring collapses both directions onto
// the single distinct neighbor so the per-node budget stays `budget`.
void append_ring(std::vector<Edge>& edges, std::uint32_t base, long long k,
                 double budget) {
  if (k < 2) return;
  if (k == 2) {
    edges.push_back({base, base + 1, budget, EdgeKind::Gossip});
    edges.push_back({base + 1, base, budget, EdgeKind::Gossip});
    return;
  }
  for (long long i = 0; i < k; ++i) {
    auto from = base + static_cast<std::uint32_t>(i);
    auto prev = base + static_cast<std::uint32_t>((i + k - 1) % k);
    auto next = base + static_cast<std::uint32_t>((i + 1) % k);
    edges.push_back({from, prev, budget / 2.0, EdgeKind::Gossip});
    edges.push_back({from, next, budget / 2.0, EdgeKind::Gossip});
  }
}

void append_cluster_gossip(std::vector<Edge>& edges, std::uint32_t base,
                           long long k, ClusterTopology topology, double budget) {
  if (k < 2) return;  // a lone node has no neighbors
  switch (topology) {
    case ClusterTopology::Disconnected:
      break;
    case ClusterTopology::UniRing:
      for (long long i = 0; i < k; ++i) {
        auto from = base + static_cast<std::uint32_t>(i);
        auto next = base + static_cast<std::uint32_t>((i + 1) % k);
        edges.push_back({from, next, budget, EdgeKind::Gossip});
      }
      break;
    case ClusterTopology::BiRing:
      append_ring(edges, base, k, budget);
      break;
    case ClusterTopology::FullyConnected:
      for (long long i = 0; i < k; ++i) {
        for (long long j = 0; j < k; ++j) {
          if (i == j) continue;
          edges.push_back({base + static_cast<std::uint32_t>(i),
                           base + static_cast<std::uint32_t>(j),
                           budget / static_cast<double>(k - 1), EdgeKind::Gossip});
        }
      }
      break;
  }
}

}  // namespace

RateGraph build_flat_graph(const FlatNetworkSpec& spec) {
  validate_spec(spec);
  const RateParams& r = spec.rates;
  const long long m = spec.m;
  const long long k = spec.k;
  const bool ring_heads = spec.head_topology == HeadTopology::Ring;
  const double head_feed = ring_heads ? *r.lambda_cb : *r.lambda_c;

  RateGraph g;
  g.lambda_e = *r.lambda_e;
  g.node_count = static_cast<std::uint32_t>(1 + m + m * k);
  g.tier.assign(g.node_count, 2);
  g.tier[0] = 0;
  for (long long c = 0; c < m; ++c) g.tier[1 + c] = 1;
  g.tier_start = {0, 1, static_cast<std::uint32_t>(1 + m)};

  // Canonical edge order: source feeds, head ring, head feeds, cluster gossip.
  for (long long c = 0; c < m; ++c) {
    g.edges.push_back({0, static_cast<std::uint32_t>(1 + c),
                       *r.lambda_s / static_cast<double>(m), EdgeKind::Feed});
  }
  if (ring_heads) append_ring(g.edges, 1, m, *r.lambda_ca);
  for (long long c = 0; c < m; ++c) {
    for (long long i = 0; i < k; ++i) {
      g.edges.push_back({static_cast<std::uint32_t>(1 + c),
                         static_cast<std::uint32_t>(1 + m + c * k + i),
                         head_feed / static_cast<double>(k), EdgeKind::Feed});
    }
  }
  if (spec.cluster_topology != ClusterTopology::Disconnected) {
    for (long long c = 0; c < m; ++c) {
      append_cluster_gossip(g.edges, static_cast<std::uint32_t>(1 + m + c * k), k,
                            spec.cluster_topology, *r.lambda);
    }
  }
  return g;
}

RateGraph build_hierarchical_graph(const HierarchicalSpec& spec) {
  validate_spec(spec);
  const RateParams& r = spec.rates;
  const long long h = spec.h();

  std::vector<long long> level_size(h);  // nodes on each level
  long long prod = 1;
  long long total = 0;
  for (long long i = 0; i < h; ++i) {
    prod *= spec.k_levels[i];
    level_size[i] = prod;
    total += prod;
  }

  RateGraph g;
  g.lambda_e = *r.lambda_e;
  g.node_count = static_cast<std::uint32_t>(1 + total);
  g.tier.assign(g.node_count, 0);
  g.tier_start.resize(h + 1);
  g.tier_start[0] = 0;
  std::uint32_t next_id = 1;
  for (long long i = 0; i < h; ++i) {
    g.tier_start[i + 1] = next_id;
    for (long long p = 0; p < level_size[i]; ++p) {
      g.tier[next_id++] = static_cast<std::uint8_t>(i + 1);
    }
  }

  for (long long i = 0; i < spec.k_levels[0]; ++i) {
    g.edges.push_back({0, static_cast<std::uint32_t>(1 + i),
                       *r.lambda_s / static_cast<double>(spec.k_levels[0]),
                       EdgeKind::Feed});
  }
  for (long long lvl = 0; lvl < h; ++lvl) {
    const std::uint32_t base = g.tier_start[lvl + 1];
    const long long k = spec.k_levels[lvl];
    const long long clusters = level_size[lvl] / k;
    const double gossip = (lvl == h - 1) ? *r.lambda : *r.lambda_a;
    for (long long c = 0; c < clusters; ++c) {
      append_ring(g.edges, base + static_cast<std::uint32_t>(c * k), k, gossip);
    }
    if (lvl + 1 < h) {
      const long long k_child = spec.k_levels[lvl + 1];
      const std::uint32_t child_base = g.tier_start[lvl + 2];
      for (long long p = 0; p < level_size[lvl]; ++p) {
        for (long long j = 0; j < k_child; ++j) {
          g.edges.push_back({base + static_cast<std::uint32_t>(p),
                             child_base + static_cast<std::uint32_t>(p * k_child + j),
                             *r.lambda_b / static_cast<double>(k_child),
                             EdgeKind::Feed});
        }
      }
    }
  }
  return g;
}

}  // namespace gossipage::model
