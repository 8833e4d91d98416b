#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbattack/graph.hpp"

namespace nbattack {

constexpr int kDefaultStateCap = 16;
constexpr int kMaxStateCap = 20;

/// One-step kernel over all 2^N spin states.
///
/// States are bitmasks (bit k set means node k holds +1). Row x lists the
/// distinct successors of x; for each successor the number of (node, +1) and
/// (node, -1) attacks that produce it is kept, so probabilities are exact
/// multiples of p/N and (1-p)/N.
struct TransitionModel {
  int n = 0;
  int r = 0;
  double p = 0.5;
  std::vector<std::uint32_t> row_start;
  std::vector<std::uint32_t> target;
  std::vector<std::uint8_t> plus_hits;
  std::vector<std::uint8_t> minus_hits;

  std::size_t state_count() const noexcept { return std::size_t{1} << n; }
  double probability(std::size_t entry) const noexcept {
    return (plus_hits[entry] * p + minus_hits[entry] * (1.0 - p)) / n;
  }
};

/// Errors: state-space-too-large when N exceeds `cap` or `cap` exceeds kMaxStateCap.
TransitionModel build_transition(const Graph& g, double p, int cap = kDefaultStateCap);

/// The unique closed communicating class, sorted ascending. Found through a
/// strongly-connected-component decomposition of the positive-probability
/// digraph. Errors: multiple-closed-classes.
std::vector<std::uint32_t> recurrent_class(const TransitionModel& t);

struct StationaryDistribution {
  int n = 0;
  std::vector<double> pi;  // indexed by state bitmask, zero off the class
  std::vector<std::uint32_t> recurrent_class;
  double residual = 0.0;    // max |(pi P)(x) - pi(x)|
  double mass_error = 0.0;  // |sum pi - 1|
  std::string method;       // "sparse-lu" or "power-iteration"
  std::uint64_t iterations = 0;
};

/// Direct sparse solve for classes of at most kDirectSolveLimit states, power
/// iteration otherwise. Errors: convergence-failure.
constexpr std::size_t kDirectSolveLimit = 4096;
StationaryDistribution stationary(const TransitionModel& t, const std::vector<std::uint32_t>& cls);
StationaryDistribution stationary(const TransitionModel& t);

double stationarity_residual(const TransitionModel& t, const std::vector<double>& pi);
/// max_x |pi(x) - pi(complement of x)|.
double flip_asymmetry(const StationaryDistribution& dist);

struct ExactReport {
  int n = 0;
  int r = 0;
  std::size_t class_size = 0;
  double mean_y = 0.0;
  double var_y = 0.0;
  double mean_eta = 0.0;
  double mean_theta = 0.0;
  double cov_eta_theta = 0.0;
  double mean_m2 = 0.0;
  /// Var of E[(dY)^2 | state].
  double var_m2_state = 0.0;
  /// Var of E[(dY)^2 | Y], grouping states by their Y level.
  double var_m2_ylevel = 0.0;
  /// Var(sum_i i^2 q_i) against Var(2(alpha - beta)); the pair-expansion route
  /// equates them, which only holds when no near pair shares more than one
  /// closed neighborhood.
  double var_square_sum = 0.0;
  double var_pair_route = 0.0;
};

ExactReport exact_functionals(const Graph& g, const NeighborhoodIndex& index, const StationaryDistribution& dist);

struct LinearityCheck {
  /// max_x |E[dY | x] - (-(r+1) Y(x) / N)| in floating point.
  double max_abs_deviation = 0.0;
  /// Integer form of the identity, checked on every state.
  bool exact_identity_holds = true;
  std::uint64_t worst_state = 0;
  std::uint64_t states_checked = 0;
};

/// Errors: requires-symmetric-p unless the model was built with p = 1/2.
LinearityCheck verify_linearity(const Graph& g, const TransitionModel& t);

struct FkgViolation {
  std::uint64_t x = 0, y = 0, meet = 0, join = 0;
  double pi_x = 0.0, pi_y = 0.0, pi_meet = 0.0, pi_join = 0.0;
};

struct FkgReport {
  bool exhaustive = true;
  std::uint64_t pairs_examined = 0;
  std::uint64_t violations_found = 0;
  double worst_gap = 0.0;  // max of pi(x)pi(y) - pi(meet)pi(join)
  std::vector<FkgViolation> violations;  // at most `limit`, in discovery order
};

/// Searches for pairs with pi(x AND y) pi(x OR y) < pi(x) pi(y) - 1e-12 under
/// the componentwise order on {-1,+1}^N. Only pairs of states with positive
/// mass can violate the inequality, so the search ranges over those; it is
/// exhaustive when their count is within `pair_budget`, otherwise a uniform
/// sample without replacement of `pair_budget` pairs is drawn.
constexpr std::uint64_t kFkgPairBudget = 10'000'000;
constexpr double kFkgTolerance = 1e-12;
FkgReport fkg_violations(const StationaryDistribution& dist, std::size_t limit, std::uint64_t seed = 0,
                         std::uint64_t pair_budget = kFkgPairBudget);

/// CSV dump: header "state,probability", one row per state with positive mass.
void write_pi_csv(std::ostream& os, const StationaryDistribution& dist);

}  // namespace nbattack
