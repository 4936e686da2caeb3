#include "gossipage/presets.hpp"

namespace gossipage::presets {

namespace {

model::RateParams flat_rates(double lambda_e, double lambda_s, double lambda_c,
                             double lambda) {
  model::RateParams r;
  r.lambda_e = lambda_e;
  r.lambda_s = lambda_s;
  r.lambda_c = lambda_c;
  r.lambda = lambda;
  return r;
}

model::RateParams ring_head_rates(double lambda_e, double lambda_s,
                                  double lambda_ca, double lambda_cb,
                                  double lambda) {
  model::RateParams r;
  r.lambda_e = lambda_e;
  r.lambda_s = lambda_s;
  r.lambda_c = lambda_ca + lambda_cb;
  r.lambda_ca = lambda_ca;
  r.lambda_cb = lambda_cb;
  r.lambda = lambda;
  return r;
}

model::RateParams hierarchy_rates(double lambda_e, double lambda_s, double lambda,
                                  double lambda_a, double lambda_b) {
  model::RateParams r;
  r.lambda_e = lambda_e;
  r.lambda_s = lambda_s;
  r.lambda = lambda;
  r.lambda_a = lambda_a;
  r.lambda_b = lambda_b;
  return r;
}

}  // namespace

std::optional<model::RateParams> find(std::string_view name) {
  if (name == "fig4a") return flat_rates(1, 1, 1, 1);
  if (name == "fig4b") return flat_rates(1, 10, 1, 1);
  if (name == "fig4c" || name == "table2-no-gossip") return flat_rates(1, 10, 10, 1);
  if (name == "fig4d") return flat_rates(1, 10, 1, 2);
  if (name == "fig5" || name == "table2-gossip") {
    return ring_head_rates(1, 10, 4, 6, 1);
  }
  if (name == "table3") return hierarchy_rates(1, 1, 5, 2, 3);
  return std::nullopt;
}

const std::vector<std::string_view>& names() {
  static const std::vector<std::string_view> all = {
      "fig4a", "fig4b", "fig4c", "fig4d", "fig5",
      "table2-no-gossip", "table2-gossip", "table3"};
  return all;
}

}  // namespace gossipage::presets
