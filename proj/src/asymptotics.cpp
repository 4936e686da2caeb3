#include "gossipage/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "gossipage/analytic.hpp"

namespace gossipage::asymptotics {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

double sqrt_pi_half() { return std::sqrt(std::numbers::pi / 2.0); }

void require_rate(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw SpecError(SpecErrorCode::NonPositiveRate,
                    std::string(name) + " must be strictly positive and finite");
  }
}

}  // namespace

double harmonic_number(long long j) {
  if (j <= 0) return 0.0;
  if (j <= 1000000) {
    double h = 0.0;
    for (long long i = 1; i <= j; ++i) h += 1.0 / static_cast<double>(i);
    return h;
  }
  const double x = static_cast<double>(j);
  return std::log(x) + kEulerGamma + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x);
}

double ring_coefficient(long long n) {
  if (n < 2) throw SpecError(SpecErrorCode::BadCount, "n must be >= 2");
  analytic::ProductSums a = analytic::ring_product_sums(n, 1.0);
  return a.sum / std::sqrt(static_cast<double>(n));
}

double approx_flat(const model::FlatNetworkSpec& spec) {
  model::validate_spec(spec);
  const model::RateParams& r = spec.rates;
  const bool ring_heads = spec.head_topology == model::HeadTopology::Ring;
  const double lambda_e = *r.lambda_e;
  const double feed = ring_heads ? *r.lambda_cb : *r.lambda_c;

  double head_term;
  if (ring_heads) {
    head_term = sqrt_pi_half() * lambda_e *
                std::sqrt(static_cast<double>(spec.m) / (*r.lambda_s * *r.lambda_ca));
  } else {
    head_term = static_cast<double>(spec.m) * lambda_e / *r.lambda_s;
  }

  switch (spec.cluster_topology) {
    case model::ClusterTopology::Disconnected:
      return head_term + static_cast<double>(spec.k) * lambda_e / feed;
    case model::ClusterTopology::UniRing:
    case model::ClusterTopology::BiRing:
      return head_term + sqrt_pi_half() * lambda_e *
                             std::sqrt(static_cast<double>(spec.k) / (*r.lambda * feed));
    case model::ClusterTopology::FullyConnected: {
      // The log-law is derived for a cluster feed equal to the gossip budget.
      if (std::abs(feed - *r.lambda) > 1e-9) {
        throw EvalError(EvalErrorCode::UnsupportedRegime,
                        "fully connected approximation needs cluster feed == lambda");
      }
      return head_term + (lambda_e / *r.lambda) * std::log(static_cast<double>(spec.k));
    }
  }
  throw EvalError(EvalErrorCode::UnsupportedRegime, "unknown topology");
}

std::vector<double> approx_hierarchical(const model::HierarchicalSpec& spec) {
  model::validate_spec(spec);
  const model::RateParams& r = spec.rates;
  const long long h = spec.h();
  const double lambda_e = *r.lambda_e;

  std::vector<double> levels;
  levels.reserve(static_cast<size_t>(h));
  const double first_gossip = (h > 1) ? *r.lambda_a : *r.lambda;
  double acc = sqrt_pi_half() * lambda_e *
               std::sqrt(static_cast<double>(spec.k_levels[0]) /
                         (*r.lambda_s * first_gossip));
  levels.push_back(acc);
  for (long long lvl = 2; lvl <= h; ++lvl) {
    const double denom = (lvl == h) ? (*r.lambda * *r.lambda_b)
                                    : (*r.lambda_a * *r.lambda_b);
    acc += sqrt_pi_half() * lambda_e *
           std::sqrt(static_cast<double>(spec.k_levels[lvl - 1]) / denom);
    levels.push_back(acc);
  }
  return levels;
}

Bounds fc_bounds(long long k, long long m, double lambda_e, double lambda_s,
                 double lambda) {
  if (k < 1 || m < 1) throw SpecError(SpecErrorCode::BadCount, "k and m must be >= 1");
  require_rate(lambda_e, "lambda_e");
  require_rate(lambda_s, "lambda_s");
  require_rate(lambda, "lambda");
  const double head_age = static_cast<double>(m) * lambda_e / lambda_s;
  const double kd = static_cast<double>(k);
  Bounds b;
  b.lower = ((kd - 1.0) * (kd - 1.0) + kd) / (kd * kd) * head_age +
            (lambda_e / lambda) *
                ((kd - 1.0) / kd * harmonic_number(k - 1) + 1.0 / kd);
  b.upper = head_age + (lambda_e / lambda) * harmonic_number(k);
  return b;
}

ExponentFit fit_scaling_exponent(const ScalingCurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 4) {
    throw EvalError(EvalErrorCode::DegenerateCurve, "need at least 4 points");
  }
  for (size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].first > 0.0) || !(pts[i].second > 0.0)) {
      throw EvalError(EvalErrorCode::DegenerateCurve, "points must be positive");
    }
    if (i > 0 && pts[i].first <= pts[i - 1].first) {
      throw EvalError(EvalErrorCode::DegenerateCurve, "n must be strictly increasing");
    }
  }
  if (pts.back().first / pts.front().first < 100.0) {
    throw EvalError(EvalErrorCode::DegenerateCurve,
                    "points must span at least two decades");
  }
  bool all_equal = true;
  for (const auto& p : pts) {
    if (p.second != pts.front().second) { all_equal = false; break; }
  }
  if (all_equal) {
    throw EvalError(EvalErrorCode::DegenerateCurve, "ages are identical");
  }

  const double count = static_cast<double>(pts.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& p : pts) {
    mean_x += std::log(p.first);
    mean_y += std::log(p.second);
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : pts) {
    const double dx = std::log(p.first) - mean_x;
    const double dy = std::log(p.second) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss = 0.0;
  for (const auto& p : pts) {
    const double res = std::log(p.second) - (fit.intercept + fit.slope * std::log(p.first));
    ss += res * res;
  }
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

const char* to_string(ScalingLaw law) {
  switch (law) {
    case ScalingLaw::DisconnectedClusters: return "disconnected";
    case ScalingLaw::RingClusters: return "ring-clustered";
    case ScalingLaw::DisconnectedRingHeads: return "disconnected-ring-heads";
    case ScalingLaw::RingRingHeads: return "ring-ring-heads";
    case ScalingLaw::HierarchyTwoLevels: return "hierarchical-h2";
    case ScalingLaw::HierarchyThreeLevels: return "hierarchical-h3";
    case ScalingLaw::FullyConnectedLog: return "fully-connected";
  }
  return "?";
}

std::optional<ScalingLaw> scaling_law_from_string(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ScalingLaw::FullyConnectedLog); ++i) {
    const auto law = static_cast<ScalingLaw>(i);
    if (name == to_string(law)) return law;
  }
  return std::nullopt;
}

namespace {

struct LawRates {
  double lambda_e, lambda_s, lambda_c, lambda_ca, lambda_cb, lambda, lambda_a, lambda_b;
};

LawRates fill_defaults(const model::RateParams& r) {
  LawRates f{};
  f.lambda_e = r.lambda_e.value_or(1.0);
  f.lambda_s = r.lambda_s.value_or(1.0);
  f.lambda_c = r.lambda_c.value_or(1.0);
  f.lambda_ca = r.lambda_ca.value_or(f.lambda_c / 2.0);
  f.lambda_cb = r.lambda_cb.value_or(f.lambda_c / 2.0);
  f.lambda = r.lambda.value_or(1.0);
  f.lambda_a = r.lambda_a.value_or(f.lambda / 2.0);
  f.lambda_b = r.lambda_b.value_or(f.lambda / 2.0);
  return f;
}

long long round_positive(double x) {
  return std::max<long long>(1, static_cast<long long>(std::llround(x)));
}

}  // namespace

ScalingCurve build_scaling_curve(ScalingLaw law, std::span<const double> n_targets,
                                 const model::RateParams& rates) {
  const LawRates f = fill_defaults(rates);
  ScalingCurve curve;
  curve.mapping_label = to_string(law);

  auto push = [&curve](double n, double age) {
    if (!curve.points.empty() && n <= curve.points.back().first) return;
    curve.points.emplace_back(n, age);
  };

  for (double target : n_targets) {
    switch (law) {
      case ScalingLaw::DisconnectedClusters: {
        const long long k = round_positive(std::sqrt(target));
        const long long m = round_positive(target / static_cast<double>(k));
        push(static_cast<double>(m * k),
             analytic::disconnected_solve(m, k, f.lambda_e, f.lambda_s, f.lambda_c));
        break;
      }
      case ScalingLaw::RingClusters: {
        const long long m = round_positive(std::cbrt(target));
        const long long k = round_positive(target / static_cast<double>(m));
        const double head = analytic::head_age_isolated(m, f.lambda_e, f.lambda_s);
        push(static_cast<double>(m * k),
             analytic::chain_solve(k, f.lambda_e, head, f.lambda_c, f.lambda).single());
        break;
      }
      case ScalingLaw::DisconnectedRingHeads: {
        const long long k = round_positive(std::cbrt(target));
        const long long m = round_positive(target / static_cast<double>(k));
        const double head =
            analytic::chain_solve(m, f.lambda_e, 0.0, f.lambda_s, f.lambda_ca).single();
        push(static_cast<double>(m * k),
             head + static_cast<double>(k) * f.lambda_e / f.lambda_cb);
        break;
      }
      case ScalingLaw::RingRingHeads: {
        const long long m = round_positive(std::sqrt(target));
        const long long k = m;
        const double head =
            analytic::chain_solve(m, f.lambda_e, 0.0, f.lambda_s, f.lambda_ca).single();
        push(static_cast<double>(m * k),
             analytic::chain_solve(k, f.lambda_e, head, f.lambda_cb, f.lambda).single());
        break;
      }
      case ScalingLaw::HierarchyTwoLevels:
      case ScalingLaw::HierarchyThreeLevels: {
        const long long h = (law == ScalingLaw::HierarchyTwoLevels) ? 2 : 3;
        const long long k = std::max<long long>(
            2, round_positive(std::pow(target, 1.0 / static_cast<double>(h))));
        model::HierarchicalSpec spec;
        spec.k_levels.assign(static_cast<size_t>(h), k);
        spec.rates.lambda_e = f.lambda_e;
        spec.rates.lambda_s = f.lambda_s;
        spec.rates.lambda = f.lambda_a + f.lambda_b;
        spec.rates.lambda_a = f.lambda_a;
        spec.rates.lambda_b = f.lambda_b;
        push(static_cast<double>(spec.node_count()),
             approx_hierarchical(spec).back());
        break;
      }
      case ScalingLaw::FullyConnectedLog: {
        // Single cluster, feed pinned to the gossip budget.
        const long long k = round_positive(target);
        push(static_cast<double>(k),
             analytic::fully_connected_solve(k, f.lambda_e, f.lambda_e / f.lambda_s,
                                             f.lambda, f.lambda)
                 .single());
        break;
      }
    }
  }
  return curve;
}

}  // namespace gossipage::asymptotics
