#include "nbattack/observables.hpp"

#include <numeric>

#include "nbattack/error.hpp"

namespace nbattack {

namespace {

void require_symmetric(Rational p) {
  if (p != Rational(1, 2)) {
    throw Error(ErrorCode::requires_symmetric_p, "conditional moments are only defined here for p = 1/2");
  }
}

}  // namespace

std::int64_t node_sum(const SpinState& state) {
  std::int64_t y = 0;
  for (std::int8_t v : state.values()) y += v;
  return y;
}

QProfile::QProfile(int r, std::vector<std::int64_t> counts) : r_(r), counts_(std::move(counts)) {
  if (r_ < 1 || counts_.size() != static_cast<std::size_t>(r_ + 2)) {
    throw Error(ErrorCode::invalid_params, "q-profile needs exactly r+2 counts");
  }
  for (std::int64_t c : counts_) {
    if (c < 0) throw Error(ErrorCode::invalid_params, "q-profile counts must be nonnegative");
  }
}

std::vector<int> QProfile::support() const {
  std::vector<int> out(counts_.size());
  for (std::size_t k = 0; k < counts_.size(); ++k) out[k] = -(r_ + 1) + 2 * static_cast<int>(k);
  return out;
}

std::int64_t QProfile::count(int i) const noexcept {
  const int shifted = i + r_ + 1;
  if (shifted < 0 || shifted % 2 != 0 || shifted / 2 > r_ + 1) return 0;
  return counts_[shifted / 2];
}

std::int64_t QProfile::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::int64_t QProfile::weighted_sum() const noexcept {
  std::int64_t s = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) s += (-(r_ + 1) + 2 * static_cast<std::int64_t>(k)) * counts_[k];
  return s;
}

std::int64_t QProfile::square_sum() const noexcept {
  std::int64_t s = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    const std::int64_t i = -(r_ + 1) + 2 * static_cast<std::int64_t>(k);
    s += i * i * counts_[k];
  }
  return s;
}

QProfile q_profile(const Graph& g, const SpinState& state) {
  const int r = g.degree();
  std::vector<std::int64_t> counts(r + 2, 0);
  for (int k = 0; k < g.size(); ++k) {
    int sum = 0;
    for (int j : g.closed_neighborhood(k)) sum += state[j];
    ++counts[(sum + r + 1) / 2];
  }
  return QProfile(r, std::move(counts));
}

std::map<int, Rational> delta_y_pmf(const QProfile& q, Rational p) {
  if (p <= Rational(0) || p >= Rational(1)) throw Error(ErrorCode::invalid_params, "p must lie in (0,1)");
  const std::int64_t n = q.total();
  if (n <= 0) throw Error(ErrorCode::invalid_params, "empty q-profile");
  const int r1 = q.degree() + 1;
  std::map<int, Rational> pmf;
  for (int i : q.support()) {
    const std::int64_t qi = q.count(i);
    if (qi == 0) continue;
    // Attacking a node whose neighborhood sums to i with +1 adds (r+1) - i.
    pmf[r1 - i] += p * Rational(qi, n);
    pmf[-r1 - i] += (Rational(1) - p) * Rational(qi, n);
  }
  return pmf;
}

Rational cond_mean_delta_y(const QProfile& q, Rational p) {
  require_symmetric(p);
  return Rational(-q.weighted_sum(), q.total());
}

Rational cond_second_moment_delta_y(const QProfile& q, Rational p) {
  require_symmetric(p);
  const std::int64_t r1 = q.degree() + 1;
  return Rational(r1 * r1) + Rational(q.square_sum(), q.total());
}

PairCounts pair_counts(const NeighborhoodIndex& index, const SpinState& state) {
  PairCounts pc;
  for (const auto& [i, j] : index.near_pairs) {
    const int a = state[i];
    const int b = state[j];
    if (a != b) {
      ++pc.beta;
    } else if (a > 0) {
      ++pc.eta;
    } else {
      ++pc.theta;
    }
  }
  pc.alpha = pc.eta + pc.theta;
  return pc;
}

double normalize_w(std::int64_t y, double sigma_y) {
  if (!(sigma_y > 0.0)) throw Error(ErrorCode::nonpositive_sigma, "sigma_Y must be positive");
  return static_cast<double>(y) / sigma_y;
}

}  // namespace nbattack
