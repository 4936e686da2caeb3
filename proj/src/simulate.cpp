#include "gossipage/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <memory>
#include <thread>

namespace gossipage::sim {

namespace {

// splitmix64, used only to expand seeds into generator state.
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// xoshiro256++; state seeded per replication so streams are independent of
// scheduling order.
struct Xoshiro {
  std::uint64_t s[4];

  // Replication r draws its state from a splitmix64 stream seeded with
  // master_seed + (r+1) * golden ratio increment.
  static Xoshiro for_replication(std::uint64_t master_seed, int replication) {
    std::uint64_t seed =
        master_seed + (static_cast<std::uint64_t>(replication) + 1) *
                          0x9E3779B97F4A7C15ull;
    Xoshiro rng;
    for (auto& word : rng.s) word = splitmix64(seed);
    return rng;
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  double uniform01() {  // in (0, 1]
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform01()); }

  std::uint32_t bounded(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }
};

// Walker alias table over event weights; O(1) categorical draws.
struct AliasTable {
  std::vector<double> prob;
  std::vector<std::uint32_t> alias;

  explicit AliasTable(const std::vector<double>& weights) {
    const std::uint32_t n = static_cast<std::uint32_t>(weights.size());
    prob.resize(n);
    alias.resize(n);
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::uint32_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * n / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.back();
      const std::uint32_t l = large.back();
      small.pop_back();
      large.pop_back();
      prob[s] = scaled[s];
      alias[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::uint32_t i : large) { prob[i] = 1.0; alias[i] = i; }
    for (std::uint32_t i : small) { prob[i] = 1.0; alias[i] = i; }
  }

  std::uint32_t sample(Xoshiro& rng) const {
    const std::uint32_t j = rng.bounded(static_cast<std::uint32_t>(prob.size()));
    const double u = (static_cast<double>(rng.next() >> 11)) * 0x1.0p-53;
    return u < prob[j] ? j : alias[j];
  }
};

// two-sided 95% Student t quantiles for small replication counts
double t_quantile_975(int df) {
  static constexpr double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return 0.0;
  if (df <= 30) return table[df - 1];
  return 1.96;
}

struct ReplicationResult {
  std::vector<double> tier_mean;  // tier 1..T
  std::uint64_t events = 0;
};

ReplicationResult run_replication(const model::RateGraph& graph,
                                  const AliasTable& alias, double total_rate,
                                  double warmup, double horizon, Xoshiro rng,
                                  std::FILE* trace) {
  const std::uint32_t n = graph.node_count;
  std::vector<std::uint64_t> version(n, 0);
  // Lazy time integrals of each node's version counter over [warmup, horizon];
  // a node is flushed only when its version changes.
  std::vector<double> integral(n, 0.0);
  std::vector<double> last(n, 0.0);
  auto flush = [&](std::uint32_t id, double t) {
    const double lo = std::max(last[id], warmup);
    if (t > lo) integral[id] += static_cast<double>(version[id]) * (t - lo);
    last[id] = t;
  };

  double t = 0.0;
  std::uint64_t events = 0;
  for (;;) {
    t += rng.exponential() / total_rate;
    if (t >= horizon) break;
    ++events;
    const std::uint32_t idx = alias.sample(rng);
    if (idx == 0) {
      flush(0, t);
      ++version[0];
      if (trace) std::fprintf(trace, "%.9f -1 %llu\n", t,
                              static_cast<unsigned long long>(version[0]));
    } else {
      const model::Edge& e = graph.edges[idx - 1];
      const std::uint64_t incoming = version[e.from];
      if (e.kind == model::EdgeKind::Feed) {
        // Receivers on a feed edge never lead their feeder.
        assert(version[e.to] <= incoming);
      }
      if (incoming > version[e.to]) {
        flush(e.to, t);
        version[e.to] = incoming;
      }
      if (trace) std::fprintf(trace, "%.9f %u %llu\n", t, idx - 1,
                              static_cast<unsigned long long>(version[e.to]));
    }
  }
  for (std::uint32_t id = 0; id < n; ++id) flush(id, horizon);

  const double span = horizon - warmup;
  const int deepest = graph.deepest_tier();
  ReplicationResult result;
  result.events = events;
  result.tier_mean.assign(static_cast<size_t>(deepest), 0.0);
  std::vector<std::uint32_t> tier_count(static_cast<size_t>(deepest), 0);
  for (std::uint32_t id = 1; id < n; ++id) {
    const int tier = graph.tier[id];
    result.tier_mean[tier - 1] += (integral[0] - integral[id]) / span;
    ++tier_count[tier - 1];
  }
  for (int tier = 0; tier < deepest; ++tier) {
    result.tier_mean[tier] /= static_cast<double>(tier_count[tier]);
  }
  return result;
}

}  // namespace

void step(SimState& state, const model::RateGraph& graph, std::int64_t event) {
  if (event == kSourceEvent) {
    ++state.version[0];
    return;
  }
  if (event < 0 || event >= static_cast<std::int64_t>(graph.edges.size())) {
    throw EvalError(EvalErrorCode::UnknownEdge,
                    "event index " + std::to_string(event) + " is not in the graph");
  }
  const model::Edge& e = graph.edges[static_cast<size_t>(event)];
  state.version[e.to] = std::max(state.version[e.to], state.version[e.from]);
}

SimEstimate simulate(const model::RateGraph& graph, const SimConfig& config) {
  if (config.replications < 1) {
    throw SpecError(SpecErrorCode::BadCount, "replications must be >= 1");
  }
  const double warmup = config.warmup < 0.0 ? config.horizon / 10.0 : config.warmup;
  if (!(config.horizon > warmup) || !(config.horizon > 0.0) || warmup < 0.0) {
    throw EvalError(EvalErrorCode::HorizonTooShort,
                    "horizon must exceed the warmup period");
  }
  const double total_rate = graph.total_rate();
  if (!(total_rate > 0.0) || !std::isfinite(total_rate)) {
    throw EvalError(EvalErrorCode::ZeroTotalRate,
                    "graph has no positive update rate");
  }
  if (graph.lambda_e * config.horizon > 4.0e18) {
    throw EvalError(EvalErrorCode::HorizonTooShort,
                    "horizon overflows the 64-bit version counter");
  }

  std::vector<double> weights;
  weights.reserve(graph.edges.size() + 1);
  weights.push_back(graph.lambda_e);
  for (const model::Edge& e : graph.edges) weights.push_back(e.rate);
  const AliasTable alias(weights);

  struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
  };
  std::unique_ptr<std::FILE, FileCloser> trace_file;
  if (!config.trace_path.empty()) {
    trace_file.reset(std::fopen(config.trace_path.c_str(), "w"));
    if (!trace_file) {
      throw EvalError(EvalErrorCode::UnknownEdge,
                      "cannot open trace file " + config.trace_path);
    }
  }
  std::FILE* trace = trace_file.get();

  const int reps = config.replications;
  std::vector<ReplicationResult> results(static_cast<size_t>(reps));
  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, reps);

  // Replication 0 runs on the calling thread when tracing so file writes
  // stay ordered; all replications are otherwise order-independent.
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) return;
      results[static_cast<size_t>(r)] = run_replication(
          graph, alias, total_rate, warmup, config.horizon,
          Xoshiro::for_replication(config.master_seed, r),
          (r == 0) ? trace : nullptr);
    }
  };
  if (threads == 1 || trace) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  trace_file.reset();

  const int tier_count = static_cast<int>(results.front().tier_mean.size());
  SimEstimate estimate;
  estimate.replications = reps;
  estimate.tiers.resize(static_cast<size_t>(tier_count));
  for (const auto& r : results) estimate.events += r.events;

  const double t_mult = t_quantile_975(reps - 1);
  for (int tier = 0; tier < tier_count; ++tier) {
    double mean = 0.0;
    for (const auto& r : results) mean += r.tier_mean[tier];
    mean /= static_cast<double>(reps);
    double ss = 0.0;
    for (const auto& r : results) {
      const double d = r.tier_mean[tier] - mean;
      ss += d * d;
    }
    TierEstimate& out = estimate.tiers[static_cast<size_t>(tier)];
    out.mean_age = mean;
    out.std_err = reps > 1 ? std::sqrt(ss / (reps - 1)) / std::sqrt(double(reps)) : 0.0;
    out.ci_lo = mean - t_mult * out.std_err;
    out.ci_hi = mean + t_mult * out.std_err;
  }
  const TierEstimate& user = estimate.tiers.back();
  estimate.mean_age = user.mean_age;
  estimate.std_err = user.std_err;
  estimate.ci_lo = user.ci_lo;
  estimate.ci_hi = user.ci_hi;
  return estimate;
}

}  // namespace gossipage::sim
