#include "gossipage/analytic.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace gossipage::analytic {

namespace {

void require_count(long long value, const char* name) {
  if (value < 1) {
    throw SpecError(SpecErrorCode::BadCount, std::string(name) + " must be >= 1");
  }
}

void require_rate(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw SpecError(SpecErrorCode::NonPositiveRate,
                    std::string(name) + " must be strictly positive and finite");
  }
}

}  // namespace

double head_age_isolated(long long m, double lambda_e, double lambda_s) {
  require_count(m, "m");
  require_rate(lambda_e, "lambda_e");
  require_rate(lambda_s, "lambda_s");
  return static_cast<double>(m) * lambda_e / lambda_s;
}

double disconnected_solve(long long m, long long k, double lambda_e,
                          double lambda_s, double lambda_c) {
  require_count(m, "m");
  require_count(k, "k");
  require_rate(lambda_e, "lambda_e");
  require_rate(lambda_s, "lambda_s");
  require_rate(lambda_c, "lambda_c");
  return static_cast<double>(m) * lambda_e / lambda_s +
         static_cast<double>(k) * lambda_e / lambda_c;
}

AgeProfile chain_solve(long long k, double lambda_e, double feeder_age,
                       double feed_rate, double gossip_rate) {
  require_count(k, "k");
  require_rate(lambda_e, "lambda_e");
  require_rate(feed_rate, "feed_rate");
  if (feeder_age < 0.0) {
    throw SpecError(SpecErrorCode::NonPositiveRate, "feeder_age must be >= 0");
  }
  AgeProfile profile;
  profile.feeder_age = feeder_age;
  profile.values.resize(static_cast<size_t>(k));
  profile.values[k - 1] = feeder_age + lambda_e / feed_rate;
  if (k == 1) return profile;
  require_rate(gossip_rate, "gossip_rate");
  const double per_node_feed = feed_rate / static_cast<double>(k);
  for (long long j = k - 1; j >= 1; --j) {
    const double feed_j = static_cast<double>(j) * per_node_feed;
    profile.values[j - 1] =
        (lambda_e + feed_j * feeder_age + gossip_rate * profile.values[j]) /
        (feed_j + gossip_rate);
  }
  return profile;
}

AgeProfile fully_connected_solve(long long k, double lambda_e, double feeder_age,
                                 double feed_rate, double gossip_rate) {
  require_count(k, "k");
  require_rate(lambda_e, "lambda_e");
  require_rate(feed_rate, "feed_rate");
  if (feeder_age < 0.0) {
    throw SpecError(SpecErrorCode::NonPositiveRate, "feeder_age must be >= 0");
  }
  AgeProfile profile;
  profile.feeder_age = feeder_age;
  profile.values.resize(static_cast<size_t>(k));
  profile.values[k - 1] = feeder_age + lambda_e / feed_rate;
  if (k == 1) return profile;
  require_rate(gossip_rate, "gossip_rate");
  const double per_node_feed = feed_rate / static_cast<double>(k);
  for (long long j = k - 1; j >= 1; --j) {
    const double feed_j = static_cast<double>(j) * per_node_feed;
    const double gossip_j = static_cast<double>(j) * static_cast<double>(k - j) *
                            gossip_rate / static_cast<double>(k - 1);
    profile.values[j - 1] =
        (lambda_e + feed_j * feeder_age + gossip_j * profile.values[j]) /
        (feed_j + gossip_j);
  }
  return profile;
}

ProductSums ring_product_sums(long long k, double ratio) {
  require_count(k, "k");
  require_rate(ratio, "ratio");
  ProductSums out;
  if (k == 1) return out;
  const double kd = static_cast<double>(k);
  if (k <= 100000) {
    double b = 1.0;
    for (long long i = 1; i < k; ++i) {
      b /= 1.0 + (static_cast<double>(i) / kd) * ratio;
      out.sum += b;
    }
    out.last = b;
  } else {
    double log_b = 0.0;
    for (long long i = 1; i < k; ++i) {
      log_b -= std::log1p((static_cast<double>(i) / kd) * ratio);
      if (log_b < -745.0) {
        out.last = 0.0;  // the remaining tail is below double range
        return out;
      }
      out.last = std::exp(log_b);
      out.sum += out.last;
    }
  }
  return out;
}

double closed_form_ring(long long k, double lambda_e, double lambda_c,
                        double lambda, double feeder_age, double full_set_age) {
  if (k < 2) throw SpecError(SpecErrorCode::BadCount, "k must be >= 2");
  require_rate(lambda_e, "lambda_e");
  require_rate(lambda_c, "lambda_c");
  require_rate(lambda, "lambda");
  ProductSums b = ring_product_sums(k, lambda_c / lambda);
  return (lambda_e / lambda) * b.sum + feeder_age * (1.0 - b.last) +
         full_set_age * b.last;
}

double yates_ring_closed_form(long long n, double lambda_e, double lambda) {
  require_count(n, "n");
  require_rate(lambda_e, "lambda_e");
  require_rate(lambda, "lambda");
  if (n == 1) return lambda_e / lambda;
  ProductSums a = ring_product_sums(n, 1.0);
  return (lambda_e / lambda) * (a.sum + a.last);
}

SubsetAgeTable subset_oracle(const ClusterGraph& cluster,
                             const std::vector<double>& head_feed,
                             double feeder_age, double lambda_e) {
  const int k = cluster.k;
  require_count(k, "k");
  require_rate(lambda_e, "lambda_e");
  if (k > 20) {
    throw EvalError(EvalErrorCode::ClusterTooLarge,
                    "subset oracle is capped at k <= 20");
  }
  if (static_cast<int>(head_feed.size()) != k ||
      cluster.rates.size() != static_cast<size_t>(k) * k) {
    throw SpecError(SpecErrorCode::BadCount, "cluster tables must match k");
  }

  const std::uint32_t full = (1u << k) - 1u;
  SubsetAgeTable table;
  table.cluster_size = k;
  table.ages.assign(static_cast<size_t>(full) + 1, 0.0);

  // Whole cluster first: no outside users, so only the feeder counts.
  double full_feed = 0.0;
  for (double f : head_feed) full_feed += f;
  if (!(full_feed > 0.0)) {
    throw EvalError(EvalErrorCode::UnreachableUser,
                    "no feed rate reaches the cluster");
  }
  table.ages[full] = feeder_age + lambda_e / full_feed;

  // Group subsets by cardinality so every superset S u {i} is ready before S.
  std::vector<std::vector<std::uint32_t>> by_size(k + 1);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    by_size[std::popcount(mask)].push_back(mask);
  }

  for (int size = k - 1; size >= 1; --size) {
    for (std::uint32_t mask : by_size[size]) {
      double feed = 0.0;
      for (int i = 0; i < k; ++i) {
        if (mask & (1u << i)) feed += head_feed[i];
      }
      double neighbor_rate_total = 0.0;
      double neighbor_weighted = 0.0;
      for (int i = 0; i < k; ++i) {
        if (mask & (1u << i)) continue;
        double into_set = 0.0;
        for (int j = 0; j < k; ++j) {
          if (mask & (1u << j)) into_set += cluster.rate(i, j);
        }
        if (into_set > 0.0) {
          neighbor_rate_total += into_set;
          neighbor_weighted += into_set * table.ages[mask | (1u << i)];
        }
      }
      const double denom = feed + neighbor_rate_total;
      if (!(denom > 0.0)) {
        std::ostringstream msg;
        msg << "subset mask " << mask << " receives no updates";
        throw EvalError(EvalErrorCode::UnreachableUser, msg.str());
      }
      table.ages[mask] =
          (lambda_e + feed * feeder_age + neighbor_weighted) / denom;
    }
  }
  return table;
}

namespace {

// Contiguous-subset profile of a disconnected cluster: a subset of j nodes
// only hears from the feeder, at rate j*feed/k.
std::vector<double> disconnected_profile(long long k, double lambda_e,
                                         double feeder_age, double feed_rate) {
  std::vector<double> values(static_cast<size_t>(k));
  for (long long j = 1; j <= k; ++j) {
    values[j - 1] = feeder_age + static_cast<double>(k) * lambda_e /
                                     (static_cast<double>(j) * feed_rate);
  }
  return values;
}

}  // namespace

model::AgeReport solve_flat(const model::FlatNetworkSpec& spec) {
  model::validate_spec(spec);
  const model::RateParams& r = spec.rates;
  const bool ring_heads = spec.head_topology == model::HeadTopology::Ring;

  model::AgeReport report;
  if (ring_heads) {
    // The head tier is itself a ring cluster fed by the source.
    report.head_age = chain_solve(spec.m, *r.lambda_e, 0.0, *r.lambda_s,
                                  *r.lambda_ca).single();
  } else {
    report.head_age = head_age_isolated(spec.m, *r.lambda_e, *r.lambda_s);
  }

  const double feed = ring_heads ? *r.lambda_cb : *r.lambda_c;
  switch (spec.cluster_topology) {
    case model::ClusterTopology::Disconnected:
      report.cluster_profile =
          disconnected_profile(spec.k, *r.lambda_e, report.head_age, feed);
      break;
    case model::ClusterTopology::UniRing:
    case model::ClusterTopology::BiRing:
      report.cluster_profile =
          chain_solve(spec.k, *r.lambda_e, report.head_age, feed, *r.lambda)
              .values;
      break;
    case model::ClusterTopology::FullyConnected:
      report.cluster_profile =
          fully_connected_solve(spec.k, *r.lambda_e, report.head_age, feed,
                                *r.lambda)
              .values;
      break;
  }
  report.user_age = report.cluster_profile.front();
  return report;
}

model::AgeReport solve_hierarchical(const model::HierarchicalSpec& spec) {
  model::validate_spec(spec);
  const model::RateParams& r = spec.rates;
  const long long h = spec.h();

  model::AgeReport report;
  report.per_level.reserve(static_cast<size_t>(h));
  AgeProfile profile =
      chain_solve(spec.k_levels[0], *r.lambda_e, 0.0, *r.lambda_s,
                  h > 1 ? *r.lambda_a : *r.lambda);
  report.per_level.push_back(profile.single());
  for (long long lvl = 2; lvl <= h; ++lvl) {
    const double gossip = (lvl == h) ? *r.lambda : *r.lambda_a;
    profile = chain_solve(spec.k_levels[lvl - 1], *r.lambda_e,
                          report.per_level.back(), *r.lambda_b, gossip);
    report.per_level.push_back(profile.single());
  }
  report.head_age = report.per_level.front();
  report.user_age = report.per_level.back();
  report.cluster_profile = profile.values;  // deepest level's profile
  return report;
}

}  // namespace gossipage::analytic
