#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nbattack/chain.hpp"
#include "nbattack/estimators.hpp"
#include "nbattack/exact.hpp"
#include "nbattack/graph.hpp"
#include "nbattack/stein.hpp"

namespace nbattack {

struct SampleRow {
  std::uint32_t replica = 0;
  std::uint64_t index = 0;
  std::int64_t y = 0;
  std::int64_t eta = 0;
  std::int64_t theta = 0;
  double m2 = 0.0;
};

struct SimulationOptions {
  bool keep_rows = true;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct SimulationResult {
  MomentAccumulator accumulator;
  EstimateReport estimates;
  std::vector<SampleRow> rows;  // replica-major; empty unless keep_rows
  std::vector<std::int64_t> node_sums;  // every retained Y, replica-major
};

/// Runs every replica of `cfg` (concurrently, merged in replica order so the
/// result does not depend on scheduling) and accumulates Y, eta, theta and
/// E[(dY)^2 | state] for each retained state.
SimulationResult simulate_chain(const Graph& g, const NeighborhoodIndex& index, const ChainConfig& cfg,
                                const SimulationOptions& options = {});

/// Exact oracle bundle for small graphs.
struct ExactSolution {
  TransitionModel transition;
  StationaryDistribution distribution;
  ExactReport report;
  LinearityCheck linearity;
};

ExactSolution solve_exact(const Graph& g, const NeighborhoodIndex& index, double p, int cap = kDefaultStateCap);

struct Distances {
  double sigma_y = 0.0;
  InputSource normalization = InputSource::analytic_bound;
  double wasserstein1 = 0.0;
  double kolmogorov = 0.0;
};

/// W = Y / sigma_y for every node sum, then both distances to N(0,1).
Distances normal_distances(const std::vector<std::int64_t>& node_sums, double sigma_y, InputSource source);

/// z = (estimate - exact) / standard_error; 0 when both agree and the error is 0.
double z_score(double estimate, double exact, double standard_error);

}  // namespace nbattack
