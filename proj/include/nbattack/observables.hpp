#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "nbattack/chain.hpp"
#include "nbattack/graph.hpp"
#include "nbattack/rational.hpp"

namespace nbattack {

std::int64_t node_sum(const SpinState& state);

/// q_i = number of nodes whose closed-neighborhood sum equals i, for i in
/// I = {-(r+1), -(r-1), ..., r-1, r+1}.
class QProfile {
 public:
  QProfile(int r, std::vector<std::int64_t> counts);

  int degree() const noexcept { return r_; }
  /// The r+2 admissible neighborhood sums, ascending.
  std::vector<int> support() const;
  /// q_i; zero for any i outside I.
  std::int64_t count(int i) const noexcept;
  /// Indexed by k = (i + r + 1) / 2.
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

  std::int64_t total() const noexcept;         // sum q_i, equals N
  std::int64_t weighted_sum() const noexcept;  // sum i q_i, equals (r+1) Y
  std::int64_t square_sum() const noexcept;    // sum i^2 q_i

 private:
  int r_;
  std::vector<std::int64_t> counts_;
};

QProfile q_profile(const Graph& g, const SpinState& state);

/// Conditional law of the one-step change in Y given the q-profile. Coinciding
/// values from different branches are merged.
std::map<int, Rational> delta_y_pmf(const QProfile& q, Rational p = Rational(1, 2));

/// E[dY | state] = -(sum i q_i)/N. Requires p = 1/2.
Rational cond_mean_delta_y(const QProfile& q, Rational p = Rational(1, 2));

/// E[dY^2 | state] = (r+1)^2 + (sum i^2 q_i)/N. Requires p = 1/2.
Rational cond_second_moment_delta_y(const QProfile& q, Rational p = Rational(1, 2));

/// Counts over unordered near pairs (distance 1 or 2).
struct PairCounts {
  std::int64_t alpha = 0;  // equal values
  std::int64_t beta = 0;   // opposite values
  std::int64_t eta = 0;    // both +1
  std::int64_t theta = 0;  // both -1

  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

PairCounts pair_counts(const NeighborhoodIndex& index, const SpinState& state);

/// W = Y / sigma_y (the stationary mean of Y is zero at p = 1/2).
double normalize_w(std::int64_t y, double sigma_y);

}  // namespace nbattack
