#include "gossipage.h"

#include <cstring>
#include <new>
#include <string>

#include "gossipage/analytic.hpp"
#include "gossipage/asymptotics.hpp"
#include "gossipage/model.hpp"
#include "gossipage/optimize.hpp"
#include "gossipage/presets.hpp"
#include "gossipage/simulate.hpp"

using namespace gossipage;

namespace {

thread_local std::string g_last_error;

void set_error(std::string message) { g_last_error = std::move(message); }

ga_status classify(const std::exception& e) {
  if (dynamic_cast<const SpecError*>(&e)) return GA_ERR_SPEC;
  if (dynamic_cast<const EvalError*>(&e)) return GA_ERR_EVAL;
  if (dynamic_cast<const std::bad_alloc*>(&e)) return GA_ERR_NOMEM;
  return GA_ERR_EVAL;
}

template <typename Fn>
ga_status guarded(Fn&& fn) {
  try {
    fn();
    return GA_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return classify(e);
  } catch (...) {
    set_error("unknown error");
    return GA_ERR_EVAL;
  }
}

template <typename Handle, typename Fn>
Handle* guarded_create(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  } catch (...) {
    set_error("unknown error");
    return nullptr;
  }
}

ga_status invalid(const char* message) {
  set_error(message);
  return GA_ERR_INVALID;
}

sim::SimConfig to_sim_config(const ga_sim_config* config) {
  sim::SimConfig cfg;
  if (config) {
    if (config->horizon > 0.0) cfg.horizon = config->horizon;
    cfg.warmup = config->warmup;
    if (config->replications > 0) cfg.replications = config->replications;
    if (config->master_seed != 0) cfg.master_seed = config->master_seed;
    cfg.threads = config->threads;
  }
  return cfg;
}

}  // namespace

struct ga_rates {
  model::RateParams params;
};

struct ga_spec {
  bool hierarchical = false;
  model::FlatNetworkSpec flat;
  model::HierarchicalSpec hier;
};

struct ga_sweep {
  optimize::SweepResult result;
};

struct ga_search {
  long long h = 0;
  optimize::SearchResult result;
};

struct ga_curve {
  asymptotics::ScalingCurve curve;
};

extern "C" {

const char* ga_last_error(void) { return g_last_error.c_str(); }

const char* ga_version(void) { return "0.1.0"; }

/* ---- rates ---------------------------------------------------------- */

ga_rates* ga_rates_create(void) {
  return guarded_create<ga_rates>([] { return new ga_rates(); });
}

ga_rates* ga_rates_preset(const char* name) {
  if (!name) {
    set_error("preset name is null");
    return nullptr;
  }
  auto params = presets::find(name);
  if (!params) {
    set_error("unknown preset '" + std::string(name) + "'");
    return nullptr;
  }
  return guarded_create<ga_rates>([&] { return new ga_rates{*params}; });
}

static std::optional<double>* field_of(model::RateParams& p, ga_rate_field field) {
  switch (field) {
    case GA_RATE_LAMBDA_E: return &p.lambda_e;
    case GA_RATE_LAMBDA_S: return &p.lambda_s;
    case GA_RATE_LAMBDA_C: return &p.lambda_c;
    case GA_RATE_LAMBDA_CA: return &p.lambda_ca;
    case GA_RATE_LAMBDA_CB: return &p.lambda_cb;
    case GA_RATE_LAMBDA: return &p.lambda;
    case GA_RATE_LAMBDA_A: return &p.lambda_a;
    case GA_RATE_LAMBDA_B: return &p.lambda_b;
  }
  return nullptr;
}

ga_status ga_rates_set(ga_rates* rates, ga_rate_field field, double value) {
  if (!rates) return invalid("rates handle is null");
  auto* slot = field_of(rates->params, field);
  if (!slot) return invalid("unknown rate field");
  *slot = value;
  return GA_OK;
}

ga_status ga_rates_get(const ga_rates* rates, ga_rate_field field, double* value) {
  if (!rates || !value) return invalid("rates handle or output is null");
  auto* slot = field_of(const_cast<model::RateParams&>(rates->params), field);
  if (!slot) return invalid("unknown rate field");
  if (!slot->has_value()) return invalid("rate field is unset");
  *value = **slot;
  return GA_OK;
}

void ga_rates_free(ga_rates* rates) { delete rates; }

/* ---- scenarios ------------------------------------------------------ */

ga_spec* ga_spec_flat(long long n, long long m, long long k,
                      ga_cluster_topology cluster_topology,
                      ga_head_topology head_topology, const ga_rates* rates) {
  if (!rates) {
    set_error("rates handle is null");
    return nullptr;
  }
  if (cluster_topology < GA_CLUSTER_DISCONNECTED ||
      cluster_topology > GA_CLUSTER_FULLY_CONNECTED ||
      head_topology < GA_HEADS_DISCONNECTED || head_topology > GA_HEADS_RING) {
    set_error("unknown topology");
    return nullptr;
  }
  return guarded_create<ga_spec>([&] {
    auto* spec = new ga_spec();
    spec->hierarchical = false;
    spec->flat.n = n;
    spec->flat.m = m;
    spec->flat.k = k;
    spec->flat.cluster_topology = static_cast<model::ClusterTopology>(cluster_topology);
    spec->flat.head_topology = static_cast<model::HeadTopology>(head_topology);
    spec->flat.rates = rates->params;
    return spec;
  });
}

ga_spec* ga_spec_hierarchical(long long h, const long long* k_levels,
                              const ga_rates* rates) {
  if (!rates || !k_levels || h < 1) {
    set_error("rates/k_levels must be non-null and h >= 1");
    return nullptr;
  }
  return guarded_create<ga_spec>([&] {
    auto* spec = new ga_spec();
    spec->hierarchical = true;
    spec->hier.k_levels.assign(k_levels, k_levels + h);
    spec->hier.rates = rates->params;
    return spec;
  });
}

ga_status ga_spec_validate(const ga_spec* spec) {
  if (!spec) return invalid("spec handle is null");
  return guarded([&] {
    if (spec->hierarchical) {
      model::validate_spec(spec->hier);
    } else {
      model::validate_spec(spec->flat);
    }
  });
}

void ga_spec_free(ga_spec* spec) { delete spec; }

/* ---- solvers --------------------------------------------------------- */

ga_status ga_solve(const ga_spec* spec, ga_age_report* out) {
  if (!spec || !out) return invalid("spec handle or output is null");
  return guarded([&] {
    const model::AgeReport report = spec->hierarchical
                                        ? analytic::solve_hierarchical(spec->hier)
                                        : analytic::solve_flat(spec->flat);
    out->head_age = report.head_age;
    out->user_age = report.user_age;
  });
}

ga_status ga_solve_levels(const ga_spec* spec, double* levels, long long capacity,
                          long long* count) {
  if (!spec || !levels || !count) return invalid("spec handle or output is null");
  return guarded([&] {
    std::vector<double> values;
    if (spec->hierarchical) {
      values = analytic::solve_hierarchical(spec->hier).per_level;
    } else {
      const model::AgeReport report = analytic::solve_flat(spec->flat);
      values = {report.head_age, report.user_age};
    }
    *count = static_cast<long long>(values.size());
    if (capacity < *count) {
      throw SpecError(SpecErrorCode::BadCount, "levels buffer is too small");
    }
    std::memcpy(levels, values.data(), values.size() * sizeof(double));
  });
}

ga_status ga_approx(const ga_spec* spec, double* out) {
  if (!spec || !out) return invalid("spec handle or output is null");
  return guarded([&] {
    *out = spec->hierarchical ? asymptotics::approx_hierarchical(spec->hier).back()
                              : asymptotics::approx_flat(spec->flat);
  });
}

/* ---- simulation ------------------------------------------------------ */

ga_status ga_simulate(const ga_spec* spec, const ga_sim_config* config,
                      const char* trace_path, ga_sim_estimate* out) {
  if (!spec || !out) return invalid("spec handle or output is null");
  return guarded([&] {
    sim::SimConfig cfg = to_sim_config(config);
    if (trace_path) cfg.trace_path = trace_path;
    const model::RateGraph graph =
        spec->hierarchical ? model::build_hierarchical_graph(spec->hier)
                           : model::build_flat_graph(spec->flat);
    const sim::SimEstimate estimate = sim::simulate(graph, cfg);
    out->mean_age = estimate.mean_age;
    out->std_err = estimate.std_err;
    out->ci_lo = estimate.ci_lo;
    out->ci_hi = estimate.ci_hi;
    out->head_mean = estimate.tiers.front().mean_age;
    out->events = estimate.events;
    out->replications = estimate.replications;
  });
}

/* ---- sweeps ----------------------------------------------------------- */

ga_sweep* ga_sweep_run(long long n, ga_cluster_topology cluster_topology,
                       ga_head_topology head_topology, const ga_rates* rates) {
  if (!rates) {
    set_error("rates handle is null");
    return nullptr;
  }
  return guarded_create<ga_sweep>([&] {
    auto* sweep = new ga_sweep();
    sweep->result = optimize::sweep_cluster_size(
        n, rates->params, static_cast<model::ClusterTopology>(cluster_topology),
        static_cast<model::HeadTopology>(head_topology));
    return sweep;
  });
}

long long ga_sweep_size(const ga_sweep* sweep) {
  return sweep ? static_cast<long long>(sweep->result.rows.size()) : 0;
}

ga_status ga_sweep_row_get(const ga_sweep* sweep, long long index, ga_sweep_row* out) {
  if (!sweep || !out) return invalid("sweep handle or output is null");
  if (index < 0 || index >= ga_sweep_size(sweep)) return invalid("row index out of range");
  const optimize::SweepRow& row = sweep->result.rows[static_cast<size_t>(index)];
  out->k = row.k;
  out->m = row.m;
  out->head_age = row.head_age;
  out->user_age = row.user_age;
  return GA_OK;
}

long long ga_sweep_argmin_size(const ga_sweep* sweep) {
  return sweep ? static_cast<long long>(sweep->result.argmin_k.size()) : 0;
}

long long ga_sweep_argmin_get(const ga_sweep* sweep, long long index) {
  if (!sweep || index < 0 || index >= ga_sweep_argmin_size(sweep)) return -1;
  return sweep->result.argmin_k[static_cast<size_t>(index)];
}

void ga_sweep_free(ga_sweep* sweep) { delete sweep; }

/* ---- rate split ------------------------------------------------------- */

ga_status ga_kkt_rate_split(double lambda_c, double lambda_s, double lambda,
                            double* lambda_ca, double* lambda_cb) {
  if (!lambda_ca || !lambda_cb) return invalid("output is null");
  return guarded([&] {
    const optimize::RateSplit split = optimize::kkt_rate_split(lambda_c, lambda_s, lambda);
    *lambda_ca = split.lambda_ca;
    *lambda_cb = split.lambda_cb;
  });
}

ga_status ga_numeric_rate_split(double lambda_c, double lambda_s, double lambda,
                                double* lambda_ca, double* lambda_cb) {
  if (!lambda_ca || !lambda_cb) return invalid("output is null");
  return guarded([&] {
    const optimize::RateSplit split =
        optimize::numeric_rate_split(lambda_c, lambda_s, lambda);
    *lambda_ca = split.lambda_ca;
    *lambda_cb = split.lambda_cb;
  });
}

/* ---- hierarchy search -------------------------------------------------- */

ga_search* ga_hierarchy_search(long long n, long long h, const ga_rates* rates,
                               ga_objective objective,
                               const ga_sim_config* sim_config) {
  if (!rates) {
    set_error("rates handle is null");
    return nullptr;
  }
  return guarded_create<ga_search>([&] {
    auto* search = new ga_search();
    search->h = h;
    sim::SimConfig cfg = to_sim_config(sim_config);
    search->result = optimize::hierarchy_search(
        n, h, rates->params, static_cast<optimize::SearchObjective>(objective),
        sim_config ? &cfg : nullptr);
    return search;
  });
}

long long ga_search_size(const ga_search* search) {
  return search ? static_cast<long long>(search->result.table.size()) : 0;
}

ga_status ga_search_row_get(const ga_search* search, long long index,
                            long long* k_levels, double* age) {
  if (!search || !k_levels || !age) return invalid("search handle or output is null");
  if (index < 0 || index >= ga_search_size(search)) return invalid("row index out of range");
  const optimize::SearchRow& row = search->result.table[static_cast<size_t>(index)];
  for (size_t i = 0; i < row.k_levels.size(); ++i) k_levels[i] = row.k_levels[i];
  *age = row.age;
  return GA_OK;
}

long long ga_search_best_size(const ga_search* search) {
  return search ? static_cast<long long>(search->result.best.size()) : 0;
}

ga_status ga_search_best_get(const ga_search* search, long long index,
                             long long* k_levels) {
  if (!search || !k_levels) return invalid("search handle or output is null");
  if (index < 0 || index >= ga_search_best_size(search)) {
    return invalid("best index out of range");
  }
  const auto& tuple = search->result.best[static_cast<size_t>(index)];
  for (size_t i = 0; i < tuple.size(); ++i) k_levels[i] = tuple[i];
  return GA_OK;
}

void ga_search_free(ga_search* search) { delete search; }

/* ---- scaling curves ----------------------------------------------------- */

ga_curve* ga_scaling_curve(const char* law, const double* n_targets, long long count,
                           const ga_rates* rates) {
  if (!law || !n_targets || count < 1) {
    set_error("law and n_targets must be non-null, count >= 1");
    return nullptr;
  }
  const auto parsed = asymptotics::scaling_law_from_string(law);
  if (!parsed) {
    set_error("unknown scaling law '" + std::string(law) + "'");
    return nullptr;
  }
  return guarded_create<ga_curve>([&] {
    auto* curve = new ga_curve();
    const model::RateParams params = rates ? rates->params : model::RateParams{};
    curve->curve = asymptotics::build_scaling_curve(
        *parsed, std::span<const double>(n_targets, static_cast<size_t>(count)),
        params);
    return curve;
  });
}

long long ga_curve_size(const ga_curve* curve) {
  return curve ? static_cast<long long>(curve->curve.points.size()) : 0;
}

ga_status ga_curve_point(const ga_curve* curve, long long index, double* n,
                         double* age) {
  if (!curve || !n || !age) return invalid("curve handle or output is null");
  if (index < 0 || index >= ga_curve_size(curve)) return invalid("point index out of range");
  *n = curve->curve.points[static_cast<size_t>(index)].first;
  *age = curve->curve.points[static_cast<size_t>(index)].second;
  return GA_OK;
}

ga_status ga_fit_exponent(const ga_curve* curve, double* slope, double* residual_norm) {
  if (!curve || !slope) return invalid("curve handle or output is null");
  return guarded([&] {
    const asymptotics::ExponentFit fit = asymptotics::fit_scaling_exponent(curve->curve);
    *slope = fit.slope;
    if (residual_norm) *residual_norm = fit.residual_norm;
  });
}

void ga_curve_free(ga_curve* curve) { delete curve; }

/* ---- primitives ---------------------------------------------------------- */

ga_status ga_ring_coefficient(long long n, double* out) {
  if (!out) return invalid("output is null");
  return guarded([&] { *out = asymptotics::ring_coefficient(n); });
}

ga_status ga_fc_bounds(long long k, long long m, double lambda_e, double lambda_s,
                       double lambda, double* lower, double* upper) {
  if (!lower || !upper) return invalid("output is null");
  return guarded([&] {
    const asymptotics::Bounds bounds =
        asymptotics::fc_bounds(k, m, lambda_e, lambda_s, lambda);
    *lower = bounds.lower;
    *upper = bounds.upper;
  });
}

} /* extern "C" */
