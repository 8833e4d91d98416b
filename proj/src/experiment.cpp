#include "nbattack/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "nbattack/error.hpp"
#include "nbattack/normdist.hpp"
#include "nbattack/observables.hpp"

namespace nbattack {

namespace {

struct ReplicaOutput {
  MomentAccumulator accumulator;
  std::vector<SampleRow> rows;
  std::vector<std::int64_t> node_sums;
};

/// E[(dY)^2 | state] for a general coin weight:
/// (r+1)^2 + (sum i^2 q_i)/N - 2(r+1)(2p-1)(sum i q_i)/N.
double second_moment(const QProfile& q, double p) {
  if (p == 0.5) return cond_second_moment_delta_y(q).to_double();
  const double r1 = q.degree() + 1.0;
  const double n = static_cast<double>(q.total());
  return r1 * r1 + static_cast<double>(q.square_sum()) / n -
         2.0 * r1 * (2.0 * p - 1.0) * static_cast<double>(q.weighted_sum()) / n;
}

ReplicaOutput run_replica(const Graph& g, const NeighborhoodIndex& index, const ChainConfig& cfg,
                          std::uint32_t replica, bool keep_rows) {
  ReplicaOutput out{MomentAccumulator(std::max<std::uint64_t>(1, cfg.samples / MomentAccumulator::kTargetBatches)), {}, {}};
  out.node_sums.reserve(cfg.samples);
  if (keep_rows) out.rows.reserve(cfg.samples);
  std::uint64_t k = 0;
  run(g, cfg, replica, [&](const SpinState& state, std::int64_t y) {
    const QProfile q = q_profile(g, state);
    const PairCounts pc = pair_counts(index, state);
    const double m2 = second_moment(q, cfg.p);
    out.accumulator.push({static_cast<double>(y), static_cast<double>(pc.eta), static_cast<double>(pc.theta), m2});
    out.node_sums.push_back(y);
    if (keep_rows) out.rows.push_back({replica, k, y, pc.eta, pc.theta, m2});
    ++k;
  });
  return out;
}

}  // namespace

SimulationResult simulate_chain(const Graph& g, const NeighborhoodIndex& index, const ChainConfig& cfg,
                                const SimulationOptions& options) {
  cfg.validate();
  unsigned threads = options.threads ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, cfg.replicas);

  std::vector<ReplicaOutput> outputs(cfg.replicas);
  for (std::uint32_t first = 0; first < cfg.replicas; first += threads) {
    const std::uint32_t last = std::min<std::uint32_t>(cfg.replicas, first + threads);
    std::vector<std::future<ReplicaOutput>> wave;
    for (std::uint32_t rep = first; rep < last; ++rep) {
      wave.push_back(std::async(std::launch::async, run_replica, std::cref(g), std::cref(index), std::cref(cfg), rep,
                                options.keep_rows));
    }
    for (std::uint32_t rep = first; rep < last; ++rep) outputs[rep] = wave[rep - first].get();
  }

  SimulationResult result{MomentAccumulator(outputs.front().accumulator), {}, {}, {}};
  for (std::uint32_t rep = 0; rep < cfg.replicas; ++rep) {
    if (rep > 0) result.accumulator.merge(outputs[rep].accumulator);
    auto& out = outputs[rep];
    result.rows.insert(result.rows.end(), out.rows.begin(), out.rows.end());
    result.node_sums.insert(result.node_sums.end(), out.node_sums.begin(), out.node_sums.end());
  }
  result.estimates = result.accumulator.finalize();
  return result;
}

ExactSolution solve_exact(const Graph& g, const NeighborhoodIndex& index, double p, int cap) {
  ExactSolution sol;
  sol.transition = build_transition(g, p, cap);
  sol.distribution = stationary(sol.transition);
  sol.report = exact_functionals(g, index, sol.distribution);
  if (p == 0.5) sol.linearity = verify_linearity(g, sol.transition);
  return sol;
}

Distances normal_distances(const std::vector<std::int64_t>& node_sums, double sigma_y, InputSource source) {
  std::vector<double> w;
  w.reserve(node_sums.size());
  for (std::int64_t y : node_sums) w.push_back(normalize_w(y, sigma_y));
  const Sample sample(std::move(w));
  return {sigma_y, source, wasserstein1_to_normal(sample), kolmogorov_to_normal(sample)};
}

double z_score(double estimate, double exact, double standard_error) {
  const double diff = estimate - exact;
  if (standard_error > 0.0) return diff / standard_error;
  return std::abs(diff) <= 1e-9 * std::max(1.0, std::abs(exact)) ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace nbattack
