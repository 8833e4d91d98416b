#include "nbattack/chain.hpp"

#include <cmath>

#include "nbattack/error.hpp"

namespace nbattack {

SpinState::SpinState(int n, int value) {
  if (value != 1 && value != -1) throw Error(ErrorCode::invalid_params, "spin value must be +1 or -1");
  values_.assign(n, static_cast<std::int8_t>(value));
}

SpinState::SpinState(std::vector<std::int8_t> values) : values_(std::move(values)) {
  for (std::int8_t v : values_) {
    if (v != 1 && v != -1) throw Error(ErrorCode::invalid_params, "spin value must be +1 or -1");
  }
}

SpinState SpinState::from_mask(int n, std::uint64_t mask) {
  if (n > 64) throw Error(ErrorCode::invalid_params, "bitmask states support at most 64 nodes");
  SpinState s;
  s.values_.resize(n);
  for (int k = 0; k < n; ++k) s.values_[k] = (mask >> k) & 1U ? 1 : -1;
  return s;
}

std::uint64_t SpinState::to_mask() const {
  if (values_.size() > 64) throw Error(ErrorCode::invalid_params, "bitmask states support at most 64 nodes");
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] > 0) mask |= std::uint64_t{1} << k;
  }
  return mask;
}

SpinState SpinState::flipped() const {
  SpinState out = *this;
  for (auto& v : out.values_) v = static_cast<std::int8_t>(-v);
  return out;
}

StepRecord step(const Graph& g, SpinState& state, int coin, int node) {
  int before = 0;
  for (int k : g.closed_neighborhood(node)) {
    before += state.values_[k];
    state.values_[k] = static_cast<std::int8_t>(coin);
  }
  return {node, coin, coin * (g.degree() + 1) - before};
}

void ChainConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::invalid_params, "coin weight p must lie in (0,1)");
  if (thinning < 1) throw Error(ErrorCode::invalid_params, "thinning must be >= 1");
  if (replicas < 1) throw Error(ErrorCode::invalid_params, "replicas must be >= 1");
}

std::uint64_t default_burn_in(int n) {
  return static_cast<std::uint64_t>(std::ceil(10.0 * n * std::log(n + 1.0)));
}

std::uint64_t default_thinning(int n) { return static_cast<std::uint64_t>(n); }

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 seeded_generator(std::uint64_t seed, std::uint64_t replica) {
  std::uint64_t s = splitmix64(seed) ^ splitmix64(replica + 0x632be59bd9b4e019ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s) >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Chain::Chain(const Graph& g, double p, std::uint64_t seed, std::uint64_t replica)
    : graph_(&g), rng_(seeded_generator(seed, replica)), pick_node_(0, g.size() - 1), coin_(p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::invalid_params, "coin weight p must lie in (0,1)");
  std::bernoulli_distribution fair(0.5);
  state_.values_.resize(g.size());
  for (auto& v : state_.values_) {
    v = fair(rng_) ? 1 : -1;
    y_ += v;
  }
}

StepRecord Chain::advance() {
  const int node = pick_node_(rng_);
  const int coin = coin_(rng_) ? 1 : -1;
  const StepRecord rec = step(*graph_, state_, coin, node);
  y_ += rec.delta_y;
  ++steps_;
  return rec;
}

void Chain::advance(std::uint64_t steps) {
  for (std::uint64_t i = 0; i < steps; ++i) advance();
}

std::vector<SpinState> collect(const Graph& g, const ChainConfig& cfg, std::uint64_t replica) {
  std::vector<SpinState> out;
  out.reserve(cfg.samples);
  run(g, cfg, replica, [&](const SpinState& s, std::int64_t) { out.push_back(s); });
  return out;
}

}  // namespace nbattack
