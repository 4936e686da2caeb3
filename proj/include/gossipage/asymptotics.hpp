#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gossipage/model.hpp"

namespace gossipage::asymptotics {

// Age-vs-size samples under a stated mapping n -> (m, k).
struct ScalingCurve {
  std::vector<std::pair<double, double>> points;  // (n, age), n strictly increasing
  std::string mapping_label;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;
};

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

// (1/sqrt(n)) * sum of the single-ring decay products; tends to sqrt(pi/2).
double ring_coefficient(long long n);

// Closed-form approximation for a flat scenario's user age. The fully
// connected branches assume the cluster feed equals the gossip budget and
// refuse other regimes.
double approx_flat(const model::FlatNetworkSpec& spec);

// Per-level closed-form approximations, cumulatively summed; the last entry
// approximates an end user's age.
std::vector<double> approx_hierarchical(const model::HierarchicalSpec& spec);

// Sandwich bounds for a fully connected cluster's single-node age in the
// lambda_c = lambda regime; the head age enters as m*lambda_e/lambda_s.
Bounds fc_bounds(long long k, long long m, double lambda_e, double lambda_s,
                 double lambda);

// Ordinary least squares of log(age) on log(n). Requires >= 4 points
// spanning at least two decades with non-constant ages.
ExponentFit fit_scaling_exponent(const ScalingCurve& curve);

double harmonic_number(long long j);

// Named size mappings behind the scaling claims. Each law fixes how (m, k)
// or the level sizes grow with n; exact solvers generate the ages except for
// the hierarchical laws, which use the closed-form approximation.
enum class ScalingLaw : int {
  DisconnectedClusters = 0,   // k = sqrt(n), isolated heads
  RingClusters = 1,           // m = n^(1/3), isolated heads
  DisconnectedRingHeads = 2,  // k = n^(1/3), ring heads
  RingRingHeads = 3,          // m = k = sqrt(n), ring heads
  HierarchyTwoLevels = 4,     // k_i = n^(1/2)
  HierarchyThreeLevels = 5,   // k_i = n^(1/3)
  FullyConnectedLog = 6,      // k = n/m at fixed m, lambda_c = lambda
};

const char* to_string(ScalingLaw law);
std::optional<ScalingLaw> scaling_law_from_string(std::string_view name);

// Builds the curve for a law over the target sizes. Missing rates default to
// 1 (splits to 1/2 each). Points carry the realized integer network size.
ScalingCurve build_scaling_curve(ScalingLaw law, std::span<const double> n_targets,
                                 const model::RateParams& rates);

}  // namespace gossipage::asymptotics
