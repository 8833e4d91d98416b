#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nbattack/graph.hpp"

namespace nbattack {

struct StepRecord;
class Chain;

/// Assignment of +1/-1 to every node of a graph.
class SpinState {
 public:
  SpinState() = default;
  /// All nodes set to `value` (which must be +1 or -1).
  SpinState(int n, int value);
  /// Throws invalid-params unless every entry is exactly +1 or -1.
  explicit SpinState(std::vector<std::int8_t> values);

  /// Bit k set means node k holds +1.
  static SpinState from_mask(int n, std::uint64_t mask);
  std::uint64_t to_mask() const;

  int size() const noexcept { return static_cast<int>(values_.size()); }
  int operator[](int node) const noexcept { return values_[node]; }
  std::span<const std::int8_t> values() const noexcept { return values_; }

  /// Global spin flip.
  SpinState flipped() const;

  friend bool operator==(const SpinState&, const SpinState&) = default;

 private:
  friend StepRecord step(const Graph& g, SpinState& state, int coin, int node);
  friend class Chain;
  std::vector<std::int8_t> values_;
};

struct StepRecord {
  int chosen_node = 0;
  int coin = 0;
  int delta_y = 0;
};

/// Overwrites the closed neighborhood of `node` with `coin` in place.
/// delta_y = coin*(r+1) - (previous sum over the closed neighborhood).
StepRecord step(const Graph& g, SpinState& state, int coin, int node);

struct ChainConfig {
  double p = 0.5;
  std::uint64_t seed = 0;
  std::uint64_t burn_in_steps = 0;
  std::uint64_t thinning = 1;
  std::uint64_t samples = 0;
  std::uint32_t replicas = 1;

  /// Throws invalid-params unless 0 < p < 1, thinning >= 1 and replicas >= 1.
  void validate() const;
};

/// ceil(10 * N * ln(N + 1)).
std::uint64_t default_burn_in(int n);
/// N steps between retained samples.
std::uint64_t default_thinning(int n);

/// splitmix64 finaliser; also used to expand (seed, replica) into generator seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// One replica of the Neighborhood Attack chain.
///
/// The generator is std::mt19937_64 seeded from a splitmix64 expansion of
/// (seed, replica), so a replica's trajectory is a pure function of those two
/// numbers on a given build.
class Chain {
 public:
  Chain(const Graph& g, double p, std::uint64_t seed, std::uint64_t replica);

  /// One uniformly chosen node attacked with a Bernoulli(p) coin.
  StepRecord advance();
  void advance(std::uint64_t steps);

  const SpinState& state() const noexcept { return state_; }
  std::int64_t node_sum() const noexcept { return y_; }
  std::uint64_t steps_taken() const noexcept { return steps_; }

 private:
  const Graph* graph_;
  std::mt19937_64 rng_;
  std::uniform_int_distribution<int> pick_node_;
  std::bernoulli_distribution coin_;
  SpinState state_;
  std::int64_t y_ = 0;
  std::uint64_t steps_ = 0;
};

/// Runs replica `replica`: i.i.d. uniform start, `burn_in_steps` steps, then
/// `samples` times advances `thinning` steps and hands the state to `visit`.
template <typename Visitor>
void run(const Graph& g, const ChainConfig& cfg, std::uint64_t replica, Visitor&& visit) {
  cfg.validate();
  Chain chain(g, cfg.p, cfg.seed, replica);
  chain.advance(cfg.burn_in_steps);
  for (std::uint64_t s = 0; s < cfg.samples; ++s) {
    chain.advance(cfg.thinning);
    visit(chain.state(), chain.node_sum());
  }
}

/// Materialised form of `run`, convenient for tests and bindings.
std::vector<SpinState> collect(const Graph& g, const ChainConfig& cfg, std::uint64_t replica);

}  // namespace nbattack
