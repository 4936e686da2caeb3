// gossipage CLI: drives the solver library through its C API.
//
// Subcommands: analyze, simulate, sweep, rate-split, hierarchy, scaling.
// Experiments come either from flags or from a single JSON config
// (--config); results go to stdout or --out as CSV or JSON.
#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gossipage.h"

using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CliError : std::runtime_error {
  int exit_code;
  CliError(int code, const std::string& message)
      : std::runtime_error(message), exit_code(code) {}
};

void check(ga_status status) {
  if (status == GA_OK) return;
  const int code =
      (status == GA_ERR_SPEC || status == GA_ERR_INVALID) ? kExitConfig : kExitRuntime;
  throw CliError(code, ga_last_error());
}

template <typename T>
T* checked(T* handle) {
  if (!handle) throw CliError(kExitConfig, ga_last_error());
  return handle;
}

struct RatesDeleter {
  void operator()(ga_rates* p) const { ga_rates_free(p); }
};
struct SpecDeleter {
  void operator()(ga_spec* p) const { ga_spec_free(p); }
};
struct SweepDeleter {
  void operator()(ga_sweep* p) const { ga_sweep_free(p); }
};
struct SearchDeleter {
  void operator()(ga_search* p) const { ga_search_free(p); }
};
struct CurveDeleter {
  void operator()(ga_curve* p) const { ga_curve_free(p); }
};
using RatesPtr = std::unique_ptr<ga_rates, RatesDeleter>;
using SpecPtr = std::unique_ptr<ga_spec, SpecDeleter>;
using SweepPtr = std::unique_ptr<ga_sweep, SweepDeleter>;
using SearchPtr = std::unique_ptr<ga_search, SearchDeleter>;
using CurvePtr = std::unique_ptr<ga_curve, CurveDeleter>;

std::string format_age(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

ga_cluster_topology parse_cluster_topology(const std::string& name) {
  if (name == "disconnected") return GA_CLUSTER_DISCONNECTED;
  if (name == "uni-ring" || name == "uni_ring") return GA_CLUSTER_UNI_RING;
  if (name == "ring" || name == "bi-ring" || name == "bi_ring") return GA_CLUSTER_RING;
  if (name == "fully-connected" || name == "fully_connected" || name == "fc") {
    return GA_CLUSTER_FULLY_CONNECTED;
  }
  throw CliError(kExitConfig, "unknown cluster topology '" + name + "'");
}

ga_head_topology parse_head_topology(const std::string& name) {
  if (name == "disconnected") return GA_HEADS_DISCONNECTED;
  if (name == "ring") return GA_HEADS_RING;
  throw CliError(kExitConfig, "unknown head topology '" + name + "'");
}

const char* cluster_topology_label(ga_cluster_topology t) {
  switch (t) {
    case GA_CLUSTER_DISCONNECTED: return "disconnected";
    case GA_CLUSTER_UNI_RING: return "uni-ring";
    case GA_CLUSTER_RING: return "ring";
    case GA_CLUSTER_FULLY_CONNECTED: return "fully-connected";
  }
  return "?";
}

const char* head_topology_label(ga_head_topology t) {
  return t == GA_HEADS_RING ? "ring" : "disconnected";
}

const std::map<std::string, ga_rate_field>& rate_fields() {
  static const std::map<std::string, ga_rate_field> fields = {
      {"lambda_e", GA_RATE_LAMBDA_E},   {"lambda_s", GA_RATE_LAMBDA_S},
      {"lambda_c", GA_RATE_LAMBDA_C},   {"lambda_ca", GA_RATE_LAMBDA_CA},
      {"lambda_cb", GA_RATE_LAMBDA_CB}, {"lambda", GA_RATE_LAMBDA},
      {"lambda_a", GA_RATE_LAMBDA_A},   {"lambda_b", GA_RATE_LAMBDA_B}};
  return fields;
}

// ---- experiment configuration ------------------------------------------

struct RateOptions {
  std::string preset;
  std::map<std::string, double> values;  // keyed by field name

  RatesPtr build() const {
    RatesPtr rates(checked(preset.empty() ? ga_rates_create()
                                          : ga_rates_preset(preset.c_str())));
    for (const auto& [name, value] : values) {
      check(ga_rates_set(rates.get(), rate_fields().at(name), value));
    }
    return rates;
  }
};

struct FlatOptions {
  long long n = 0, m = 0, k = 0;
  std::string cluster_topology = "ring";
  std::string head_topology = "disconnected";
};

struct SimOptions {
  double horizon = 0.0;  // 0: library default
  double warmup = -1.0;
  int replications = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string trace;

  ga_sim_config to_config() const {
    return {horizon, warmup, replications, seed, threads};
  }
};

struct ExperimentConfig {
  std::string command;
  std::optional<FlatOptions> flat;
  std::optional<std::vector<long long>> k_levels;  // hierarchical scenario
  RateOptions rates;
  SimOptions sim;
  std::string format;  // "", "csv" or "json"
  std::string out;
  // sweep block
  long long sweep_n = 0;
  std::string sweep_cluster = "all";
  std::string sweep_heads = "disconnected";
  // hierarchy block
  long long search_n = 0, search_h = 0;
  std::string objective = "exact";
  std::vector<std::pair<double, double>> pairs;  // (lambda_a, lambda_b)
  std::vector<long long> evaluate;
  // scaling block
  std::string theorem;
  std::string n_range = "1e2:1e6";
};

void reject_unknown_keys(const json& object, const char* block,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) { known = true; break; }
    }
    if (!known) {
      throw CliError(kExitConfig,
                     std::string("unknown key '") + key + "' in " + block);
    }
  }
}

// Loads and validates a JSON experiment document.
ExperimentConfig parse_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in.good()) throw CliError(kExitConfig, "cannot read config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw CliError(kExitConfig, std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw CliError(kExitConfig, "config must be a JSON object");
  reject_unknown_keys(doc, "config",
                      {"command", "flat", "hierarchical", "sweep", "hierarchy",
                       "scaling", "rates", "sim", "format", "out"});

  ExperimentConfig cfg;
  cfg.command = command;
  if (doc.contains("command") && doc["command"].get<std::string>() != command) {
    throw CliError(kExitConfig, "config is for command '" +
                                    doc["command"].get<std::string>() +
                                    "', invoked as '" + command + "'");
  }

  const int scenario_blocks = int(doc.contains("flat")) +
                              int(doc.contains("hierarchical")) +
                              int(doc.contains("sweep")) + int(doc.contains("hierarchy")) +
                              int(doc.contains("scaling"));
  if (scenario_blocks != 1) {
    throw CliError(kExitConfig, "config needs exactly one scenario block");
  }

  if (doc.contains("flat")) {
    const json& flat = doc["flat"];
    reject_unknown_keys(flat, "flat", {"n", "m", "k", "cluster_topology", "head_topology"});
    FlatOptions opts;
    opts.n = flat.value("n", 0LL);
    opts.m = flat.value("m", 0LL);
    opts.k = flat.value("k", 0LL);
    if (opts.n == 0 && opts.m > 0 && opts.k > 0) opts.n = opts.m * opts.k;
    if (opts.m == 0 && opts.k > 0) opts.m = opts.n / std::max(1LL, opts.k);
    if (opts.k == 0 && opts.m > 0) opts.k = opts.n / std::max(1LL, opts.m);
    opts.cluster_topology = flat.value("cluster_topology", "ring");
    opts.head_topology = flat.value("head_topology", "disconnected");
    cfg.flat = opts;
  }
  if (doc.contains("hierarchical")) {
    const json& hier = doc["hierarchical"];
    reject_unknown_keys(hier, "hierarchical", {"k_levels"});
    if (!hier.contains("k_levels")) {
      throw CliError(kExitConfig, "hierarchical block needs k_levels");
    }
    cfg.k_levels = hier["k_levels"].get<std::vector<long long>>();
  }
  if (doc.contains("sweep")) {
    const json& sweep = doc["sweep"];
    reject_unknown_keys(sweep, "sweep", {"n", "cluster_topology", "head_topology"});
    cfg.sweep_n = sweep.value("n", 0LL);
    cfg.sweep_cluster = sweep.value("cluster_topology", "all");
    cfg.sweep_heads = sweep.value("head_topology", "disconnected");
  }
  if (doc.contains("hierarchy")) {
    const json& block = doc["hierarchy"];
    reject_unknown_keys(block, "hierarchy", {"n", "h", "objective", "pairs", "evaluate"});
    cfg.search_n = block.value("n", 0LL);
    cfg.search_h = block.value("h", 0LL);
    cfg.objective = block.value("objective", "exact");
    if (block.contains("pairs")) {
      for (const json& pair : block["pairs"]) {
        cfg.pairs.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
      }
    }
    if (block.contains("evaluate")) {
      cfg.evaluate = block["evaluate"].get<std::vector<long long>>();
    }
  }
  if (doc.contains("scaling")) {
    const json& block = doc["scaling"];
    reject_unknown_keys(block, "scaling", {"theorem", "n"});
    cfg.theorem = block.value("theorem", "");
    cfg.n_range = block.value("n", "1e2:1e6");
  }
  if (doc.contains("rates")) {
    const json& rates = doc["rates"];
    reject_unknown_keys(rates, "rates",
                        {"preset", "lambda_e", "lambda_s", "lambda_c", "lambda_ca",
                         "lambda_cb", "lambda", "lambda_a", "lambda_b"});
    cfg.rates.preset = rates.value("preset", "");
    for (const auto& [name, field] : rate_fields()) {
      (void)field;
      if (rates.contains(name)) cfg.rates.values[name] = rates[name].get<double>();
    }
  }
  if (doc.contains("sim")) {
    const json& sim = doc["sim"];
    reject_unknown_keys(sim, "sim",
                        {"horizon", "warmup", "replications", "seed", "threads", "trace"});
    cfg.sim.horizon = sim.value("horizon", 0.0);
    cfg.sim.warmup = sim.value("warmup", -1.0);
    cfg.sim.replications = sim.value("replications", 0);
    cfg.sim.seed = sim.value("seed", 0ULL);
    cfg.sim.threads = sim.value("threads", 0);
    cfg.sim.trace = sim.value("trace", "");
  }
  cfg.format = doc.value("format", "");
  cfg.out = doc.value("out", "");
  return cfg;
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out.good()) throw CliError(kExitRuntime, "cannot write " + out_path);
  out << content;
}

// ---- scenario construction ----------------------------------------------

SpecPtr build_flat_spec(const FlatOptions& opts, const ga_rates* rates) {
  return SpecPtr(checked(ga_spec_flat(opts.n, opts.m, opts.k,
                                      parse_cluster_topology(opts.cluster_topology),
                                      parse_head_topology(opts.head_topology), rates)));
}

SpecPtr build_hier_spec(const std::vector<long long>& k_levels, const ga_rates* rates) {
  return SpecPtr(checked(ga_spec_hierarchical(
      static_cast<long long>(k_levels.size()), k_levels.data(), rates)));
}

json scenario_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.flat) {
    j["type"] = "flat";
    j["n"] = cfg.flat->n;
    j["m"] = cfg.flat->m;
    j["k"] = cfg.flat->k;
    j["cluster_topology"] =
        cluster_topology_label(parse_cluster_topology(cfg.flat->cluster_topology));
    j["head_topology"] =
        head_topology_label(parse_head_topology(cfg.flat->head_topology));
  } else {
    j["type"] = "hierarchical";
    j["k_levels"] = *cfg.k_levels;
  }
  return j;
}

constexpr const char* kCsvHeader = "topology,head_topology,n,m,k,head_age,user_age";

std::string flat_csv_row(const FlatOptions& opts, double head_age, double user_age) {
  std::ostringstream row;
  row << cluster_topology_label(parse_cluster_topology(opts.cluster_topology)) << ','
      << head_topology_label(parse_head_topology(opts.head_topology)) << ',' << opts.n
      << ',' << opts.m << ',' << opts.k << ',' << format_age(head_age) << ','
      << format_age(user_age);
  return row.str();
}

// ---- subcommands ----------------------------------------------------------

int run_analyze(const ExperimentConfig& cfg) {
  RatesPtr rates = cfg.rates.build();
  SpecPtr spec = cfg.flat ? build_flat_spec(*cfg.flat, rates.get())
                          : build_hier_spec(*cfg.k_levels, rates.get());
  ga_age_report report{};
  check(ga_solve(spec.get(), &report));

  double approx = 0.0;
  const bool has_approx = ga_approx(spec.get(), &approx) == GA_OK;

  std::vector<double> levels(cfg.flat ? 2 : cfg.k_levels->size());
  long long level_count = 0;
  check(ga_solve_levels(spec.get(), levels.data(),
                        static_cast<long long>(levels.size()), &level_count));

  if (cfg.format == "csv") {
    std::ostringstream out;
    if (cfg.flat) {
      out << kCsvHeader << '\n'
          << flat_csv_row(*cfg.flat, report.head_age, report.user_age) << '\n';
    } else {
      out << "level,age\n";
      for (long long i = 0; i < level_count; ++i) {
        out << (i + 1) << ',' << format_age(levels[i]) << '\n';
      }
    }
    emit(out.str(), cfg.out);
    return 0;
  }
  json j;
  j["command"] = "analyze";
  j["scenario"] = scenario_json(cfg);
  j["head_age"] = report.head_age;
  j["user_age"] = report.user_age;
  j["approx_user_age"] = has_approx ? json(approx) : json(nullptr);
  if (!cfg.flat) {
    j["per_level"] = std::vector<double>(levels.begin(), levels.begin() + level_count);
  }
  emit(j.dump(2) + "\n", cfg.out);
  return 0;
}

int run_simulate(const ExperimentConfig& cfg) {
  RatesPtr rates = cfg.rates.build();
  SpecPtr spec = cfg.flat ? build_flat_spec(*cfg.flat, rates.get())
                          : build_hier_spec(*cfg.k_levels, rates.get());
  ga_age_report report{};
  check(ga_solve(spec.get(), &report));
  const ga_sim_config sim_cfg = cfg.sim.to_config();
  ga_sim_estimate estimate{};
  check(ga_simulate(spec.get(), &sim_cfg,
                    cfg.sim.trace.empty() ? nullptr : cfg.sim.trace.c_str(), &estimate));

  if (cfg.format == "csv") {
    std::ostringstream out;
    if (cfg.flat) {
      out << kCsvHeader << ",sim_mean,sim_ci_lo,sim_ci_hi\n"
          << flat_csv_row(*cfg.flat, report.head_age, report.user_age) << ','
          << format_age(estimate.mean_age) << ',' << format_age(estimate.ci_lo) << ','
          << format_age(estimate.ci_hi) << '\n';
    } else {
      out << "exact_user_age,sim_mean,sim_ci_lo,sim_ci_hi\n"
          << format_age(report.user_age) << ',' << format_age(estimate.mean_age) << ','
          << format_age(estimate.ci_lo) << ',' << format_age(estimate.ci_hi) << '\n';
    }
    emit(out.str(), cfg.out);
    return 0;
  }
  json j;
  j["command"] = "simulate";
  j["scenario"] = scenario_json(cfg);
  j["exact_head_age"] = report.head_age;
  j["exact_user_age"] = report.user_age;
  j["sim"] = {{"mean_age", estimate.mean_age}, {"std_err", estimate.std_err},
              {"ci_lo", estimate.ci_lo},       {"ci_hi", estimate.ci_hi},
              {"head_mean", estimate.head_mean}, {"events", estimate.events},
              {"replications", estimate.replications}};
  emit(j.dump(2) + "\n", cfg.out);
  return 0;
}

int run_sweep(const ExperimentConfig& cfg) {
  RatesPtr rates = cfg.rates.build();
  std::vector<ga_cluster_topology> topologies;
  if (cfg.sweep_cluster == "all") {
    topologies = {GA_CLUSTER_DISCONNECTED, GA_CLUSTER_RING, GA_CLUSTER_FULLY_CONNECTED};
  } else {
    topologies = {parse_cluster_topology(cfg.sweep_cluster)};
  }
  const ga_head_topology heads = parse_head_topology(cfg.sweep_heads);

  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  json rows = json::array();
  json argmin = json::object();
  for (ga_cluster_topology topology : topologies) {
    SweepPtr sweep(checked(ga_sweep_run(cfg.sweep_n, topology, heads, rates.get())));
    for (long long i = 0; i < ga_sweep_size(sweep.get()); ++i) {
      ga_sweep_row row{};
      check(ga_sweep_row_get(sweep.get(), i, &row));
      csv << cluster_topology_label(topology) << ',' << head_topology_label(heads)
          << ',' << cfg.sweep_n << ',' << row.m << ',' << row.k << ','
          << format_age(row.head_age) << ',' << format_age(row.user_age) << '\n';
      rows.push_back({{"topology", cluster_topology_label(topology)},
                      {"head_topology", head_topology_label(heads)},
                      {"n", cfg.sweep_n},
                      {"m", row.m},
                      {"k", row.k},
                      {"head_age", row.head_age},
                      {"user_age", row.user_age}});
    }
    std::vector<long long> ks;
    for (long long i = 0; i < ga_sweep_argmin_size(sweep.get()); ++i) {
      ks.push_back(ga_sweep_argmin_get(sweep.get(), i));
    }
    argmin[cluster_topology_label(topology)] = ks;
  }
  if (cfg.format == "json") {
    json j;
    j["command"] = "sweep";
    j["n"] = cfg.sweep_n;
    j["head_topology"] = head_topology_label(heads);
    j["rows"] = rows;
    j["argmin_k"] = argmin;
    emit(j.dump(2) + "\n", cfg.out);
  } else {
    emit(csv.str(), cfg.out);
  }
  return 0;
}

int run_rate_split(double lambda_c, double lambda_s, double lambda,
                   const ExperimentConfig& cfg) {
  double kkt_ca = 0.0, kkt_cb = 0.0, num_ca = 0.0, num_cb = 0.0;
  check(ga_kkt_rate_split(lambda_c, lambda_s, lambda, &kkt_ca, &kkt_cb));
  check(ga_numeric_rate_split(lambda_c, lambda_s, lambda, &num_ca, &num_cb));
  if (cfg.format == "json") {
    json j;
    j["command"] = "rate-split";
    j["kkt"] = {{"lambda_ca", kkt_ca}, {"lambda_cb", kkt_cb}};
    j["numeric"] = {{"lambda_ca", num_ca}, {"lambda_cb", num_cb}};
    emit(j.dump(2) + "\n", cfg.out);
  } else if (cfg.format == "csv") {
    emit("lambda_ca,lambda_cb\n" + format_age(kkt_ca) + "," + format_age(kkt_cb) + "\n",
         cfg.out);
  } else {
    emit("lambda_ca=" + format_age(kkt_ca) + " lambda_cb=" + format_age(kkt_cb) + "\n",
         cfg.out);
  }
  return 0;
}

ga_objective parse_objective(const std::string& name) {
  if (name == "exact") return GA_OBJECTIVE_EXACT;
  if (name == "approx") return GA_OBJECTIVE_APPROX;
  if (name == "simulate") return GA_OBJECTIVE_SIMULATE;
  throw CliError(kExitConfig, "unknown objective '" + name + "'");
}

json evaluate_tuple(const std::vector<long long>& k_levels, const ga_rates* rates,
                    const SimOptions& sim) {
  SpecPtr spec = build_hier_spec(k_levels, rates);
  ga_age_report report{};
  check(ga_solve(spec.get(), &report));
  double approx = 0.0;
  check(ga_approx(spec.get(), &approx));
  const ga_sim_config sim_cfg = sim.to_config();
  ga_sim_estimate estimate{};
  check(ga_simulate(spec.get(), &sim_cfg, nullptr, &estimate));
  json j;
  j["k_levels"] = k_levels;
  j["exact"] = report.user_age;
  j["approx"] = approx;
  j["sim_mean"] = estimate.mean_age;
  j["sim_ci_lo"] = estimate.ci_lo;
  j["sim_ci_hi"] = estimate.ci_hi;
  return j;
}

json search_json(long long n, long long h, const ga_rates* rates,
                 ga_objective objective, const SimOptions& sim) {
  const ga_sim_config sim_cfg = sim.to_config();
  SearchPtr search(checked(ga_hierarchy_search(
      n, h, rates, objective, objective == GA_OBJECTIVE_SIMULATE ? &sim_cfg : nullptr)));
  json rows = json::array();
  std::vector<long long> k_levels(static_cast<size_t>(h));
  for (long long i = 0; i < ga_search_size(search.get()); ++i) {
    double age = 0.0;
    check(ga_search_row_get(search.get(), i, k_levels.data(), &age));
    rows.push_back({{"k_levels", k_levels}, {"age", age}});
  }
  json best = json::array();
  for (long long i = 0; i < ga_search_best_size(search.get()); ++i) {
    check(ga_search_best_get(search.get(), i, k_levels.data()));
    best.push_back(k_levels);
  }
  json j;
  j["rows"] = rows;
  j["best"] = best;
  j["min_age"] = rows.empty() ? json(nullptr) : rows.front()["age"];
  return j;
}

int run_hierarchy(const ExperimentConfig& cfg) {
  const ga_objective objective = parse_objective(cfg.objective);
  json j;
  j["command"] = "hierarchy";
  j["n"] = cfg.search_n;
  j["h"] = cfg.search_h;
  j["objective"] = cfg.objective;

  if (cfg.pairs.empty()) {
    RatesPtr rates = cfg.rates.build();
    j.update(search_json(cfg.search_n, cfg.search_h, rates.get(), objective, cfg.sim));
    if (!cfg.evaluate.empty()) {
      j["evaluate"] = evaluate_tuple(cfg.evaluate, rates.get(), cfg.sim);
    }
  } else {
    // One search per (lambda_a, lambda_b) pair; lambda is their sum.
    json per_pair = json::array();
    for (const auto& [la, lb] : cfg.pairs) {
      RateOptions options = cfg.rates;
      options.values["lambda_a"] = la;
      options.values["lambda_b"] = lb;
      options.values["lambda"] = la + lb;
      RatesPtr rates = options.build();
      json entry = search_json(cfg.search_n, cfg.search_h, rates.get(), objective, cfg.sim);
      entry.erase("rows");
      entry["lambda_a"] = la;
      entry["lambda_b"] = lb;
      if (!cfg.evaluate.empty()) {
        entry["evaluate"] = evaluate_tuple(cfg.evaluate, rates.get(), cfg.sim);
      }
      per_pair.push_back(entry);
    }
    j["pairs"] = per_pair;
  }

  if (cfg.format == "csv") {
    std::ostringstream out;
    if (cfg.pairs.empty()) {
      for (long long i = 1; i <= cfg.search_h; ++i) out << 'k' << i << ',';
      out << "age\n";
      for (const json& row : j["rows"]) {
        for (const json& k : row["k_levels"]) out << k.get<long long>() << ',';
        out << format_age(row["age"].get<double>()) << '\n';
      }
    } else {
      out << "lambda_a,lambda_b,";
      for (long long i = 1; i <= cfg.search_h; ++i) out << 'k' << i << ',';
      out << "age\n";
      for (const json& entry : j["pairs"]) {
        out << format_age(entry["lambda_a"].get<double>()) << ','
            << format_age(entry["lambda_b"].get<double>()) << ',';
        for (const json& k : entry["best"][0]) out << k.get<long long>() << ',';
        out << format_age(entry["min_age"].get<double>()) << '\n';
      }
    }
    emit(out.str(), cfg.out);
    return 0;
  }
  emit(j.dump(2) + "\n", cfg.out);
  return 0;
}

std::vector<double> parse_n_range(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    const auto colon = text.find(':');
    const double lo = std::strtod(text.substr(0, colon).c_str(), nullptr);
    const double hi = std::strtod(text.substr(colon + 1).c_str(), nullptr);
    if (!(lo > 0) || !(hi >= lo)) {
      throw CliError(kExitConfig, "bad n range '" + text + "'");
    }
    for (double n = lo; n <= hi * 1.0000001; n *= 10.0) values.push_back(n);
  } else {
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      const double n = std::strtod(item.c_str(), nullptr);
      if (!(n > 0)) throw CliError(kExitConfig, "bad n value '" + item + "'");
      values.push_back(n);
    }
  }
  if (values.empty()) throw CliError(kExitConfig, "empty n range");
  return values;
}

int run_scaling(const ExperimentConfig& cfg) {
  const std::vector<double> targets = parse_n_range(cfg.n_range);
  RatesPtr rates;
  if (!cfg.rates.preset.empty() || !cfg.rates.values.empty()) {
    rates = cfg.rates.build();
  }
  CurvePtr curve(checked(ga_scaling_curve(cfg.theorem.c_str(), targets.data(),
                                          static_cast<long long>(targets.size()),
                                          rates.get())));
  json points = json::array();
  for (long long i = 0; i < ga_curve_size(curve.get()); ++i) {
    double n = 0.0, age = 0.0;
    check(ga_curve_point(curve.get(), i, &n, &age));
    points.push_back({n, age});
  }

  json j;
  j["command"] = "scaling";
  j["theorem"] = cfg.theorem;
  j["points"] = points;
  if (cfg.theorem == "fully-connected") {
    // Log law: report (age - head_age) * lambda / (lambda_e log k) instead of
    // a power-law slope.
    double lambda_e = 1.0, lambda_s = 1.0, lambda = 1.0;
    if (rates) {
      double v;
      if (ga_rates_get(rates.get(), GA_RATE_LAMBDA_E, &v) == GA_OK) lambda_e = v;
      if (ga_rates_get(rates.get(), GA_RATE_LAMBDA_S, &v) == GA_OK) lambda_s = v;
      if (ga_rates_get(rates.get(), GA_RATE_LAMBDA, &v) == GA_OK) lambda = v;
    }
    json ratios = json::array();
    for (const json& point : points) {
      const double k = point[0].get<double>();
      const double age = point[1].get<double>();
      if (k < 2) continue;
      ratios.push_back({k, (age - lambda_e / lambda_s) * lambda / lambda_e / std::log(k)});
    }
    j["log_ratios"] = ratios;
    j["slope"] = nullptr;
  } else {
    double slope = 0.0, residual = 0.0;
    check(ga_fit_exponent(curve.get(), &slope, &residual));
    j["slope"] = slope;
    j["residual_norm"] = residual;
  }

  if (cfg.format == "csv") {
    std::ostringstream out;
    out << "n,age\n";
    for (const json& point : points) {
      out << format_age(point[0].get<double>()) << ','
          << format_age(point[1].get<double>()) << '\n';
    }
    emit(out.str(), cfg.out);
    return 0;
  }
  emit(j.dump(2) + "\n", cfg.out);
  return 0;
}

// ---- option wiring --------------------------------------------------------

void add_rate_options(CLI::App* cmd, RateOptions& rates) {
  cmd->add_option("--rates,--preset", rates.preset,
                  "named rate bundle (fig4a..fig4d, fig5, table2-*, table3)");
  for (const auto& [name, field] : rate_fields()) {
    (void)field;
    std::string flag = "--" + name;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    cmd->add_option_function<double>(
        flag, [&rates, name = name](double v) { rates.values[name] = v; },
        "rate " + name);
  }
}

void add_sim_options(CLI::App* cmd, SimOptions& sim) {
  cmd->add_option("--horizon", sim.horizon, "simulated time span");
  cmd->add_option("--warmup", sim.warmup, "discarded prefix (default horizon/10)");
  cmd->add_option("--replications", sim.replications, "independent replications");
  cmd->add_option("--seed", sim.seed, "master seed");
  cmd->add_option("--threads", sim.threads,
                  "worker threads (default $GOSSIPAGE_THREADS or all cores)");
  cmd->add_option("--trace", sim.trace, "dump replication 0 events to this file");
}

struct ScenarioFlags {
  FlatOptions flat;
  std::vector<long long> levels;
};

void add_scenario_options(CLI::App* cmd, ScenarioFlags& flags) {
  cmd->add_option("--n", flags.flat.n, "total users");
  cmd->add_option("--m", flags.flat.m, "cluster count");
  cmd->add_option("--k", flags.flat.k, "users per cluster");
  cmd->add_option("--cluster-topology", flags.flat.cluster_topology,
                  "disconnected | uni-ring | ring | fully-connected");
  cmd->add_option("--head-topology", flags.flat.head_topology, "disconnected | ring");
  cmd->add_option("--levels", flags.levels,
                  "hierarchical level sizes k_1..k_h (selects the hierarchy model)")
      ->delimiter(',');
}

void finalize_scenario(ExperimentConfig& cfg, const ScenarioFlags& flags) {
  if (!flags.levels.empty()) {
    cfg.k_levels = flags.levels;
    return;
  }
  FlatOptions opts = flags.flat;
  if (opts.n == 0 && opts.m > 0 && opts.k > 0) opts.n = opts.m * opts.k;
  if (opts.m == 0 && opts.k > 0 && opts.n > 0) opts.m = opts.n / opts.k;
  if (opts.k == 0 && opts.m > 0 && opts.n > 0) opts.k = opts.n / opts.m;
  if (opts.n == 0) throw CliError(kExitConfig, "scenario needs --n/--m/--k or --levels");
  cfg.flat = opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"version age of clustered gossip networks"};
  app.require_subcommand(1);

  std::string config_path;
  ExperimentConfig flag_cfg;
  ScenarioFlags scenario;
  std::vector<std::string> pair_flags;
  double lambda_c = 0.0, lambda_s = 0.0, lambda = 0.0;

  if (const char* env = std::getenv("GOSSIPAGE_THREADS")) {
    flag_cfg.sim.threads = std::atoi(env);
  }

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON experiment config");
    cmd->add_option("--format", flag_cfg.format, "csv | json");
    cmd->add_option("--out", flag_cfg.out, "write results to this file");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "exact and approximate ages");
  add_common(analyze);
  add_scenario_options(analyze, scenario);
  add_rate_options(analyze, flag_cfg.rates);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo age estimate");
  add_common(simulate);
  add_scenario_options(simulate, scenario);
  add_rate_options(simulate, flag_cfg.rates);
  add_sim_options(simulate, flag_cfg.sim);

  CLI::App* sweep = app.add_subcommand("sweep", "age for every cluster size k | n");
  add_common(sweep);
  sweep->add_option("--n", flag_cfg.sweep_n, "total users");
  sweep->add_option("--cluster-topology", flag_cfg.sweep_cluster,
                    "disconnected | uni-ring | ring | fully-connected | all");
  sweep->add_option("--head-topology", flag_cfg.sweep_heads, "disconnected | ring");
  add_rate_options(sweep, flag_cfg.rates);

  CLI::App* split = app.add_subcommand("rate-split", "optimal head budget split");
  add_common(split);
  split->add_option("--lambda-c", lambda_c, "total head budget")->required();
  split->add_option("--lambda-s", lambda_s, "source rate")->required();
  split->add_option("--lambda", lambda, "node gossip rate")->required();

  CLI::App* hierarchy = app.add_subcommand("hierarchy", "level-size search");
  add_common(hierarchy);
  hierarchy->add_option("--n", flag_cfg.search_n, "total nodes");
  hierarchy->add_option("--depth", flag_cfg.search_h, "hierarchy depth h");
  hierarchy->add_option("--objective", flag_cfg.objective, "exact | approx | simulate");
  hierarchy->add_option("--pair", pair_flags, "lambda_a,lambda_b (repeatable)");
  hierarchy->add_option("--evaluate", flag_cfg.evaluate,
                        "evaluate this tuple under all objectives")
      ->delimiter(',');
  add_rate_options(hierarchy, flag_cfg.rates);
  add_sim_options(hierarchy, flag_cfg.sim);

  CLI::App* scaling = app.add_subcommand("scaling", "exponent fit for a scaling law");
  add_common(scaling);
  scaling->add_option("--theorem", flag_cfg.theorem,
                      "disconnected | ring-clustered | disconnected-ring-heads | "
                      "ring-ring-heads | hierarchical-h2 | hierarchical-h3 | "
                      "fully-connected");
  scaling->add_option("--n", flag_cfg.n_range, "targets, e.g. 1e2:1e6 or 100,1000");
  add_rate_options(scaling, flag_cfg.rates);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();

    ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = parse_config(config_path, name);
      if (!flag_cfg.format.empty()) cfg.format = flag_cfg.format;
      if (!flag_cfg.out.empty()) cfg.out = flag_cfg.out;
      if (flag_cfg.sim.threads != 0 && cfg.sim.threads == 0) {
        cfg.sim.threads = flag_cfg.sim.threads;
      }
    } else {
      cfg = flag_cfg;
      cfg.command = name;
      for (const std::string& pair : pair_flags) {
        const auto comma = pair.find(',');
        if (comma == std::string::npos) {
          throw CliError(kExitConfig, "--pair expects lambda_a,lambda_b");
        }
        cfg.pairs.emplace_back(std::strtod(pair.substr(0, comma).c_str(), nullptr),
                               std::strtod(pair.substr(comma + 1).c_str(), nullptr));
      }
      if (name == "analyze" || name == "simulate") finalize_scenario(cfg, scenario);
    }

    if (name == "analyze") return run_analyze(cfg);
    if (name == "simulate") return run_simulate(cfg);
    if (name == "sweep") return run_sweep(cfg);
    if (name == "rate-split") return run_rate_split(lambda_c, lambda_s, lambda, cfg);
    if (name == "hierarchy") return run_hierarchy(cfg);
    if (name == "scaling") return run_scaling(cfg);
    throw CliError(kExitConfig, "unknown command " + name);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
