#include "nbattack/exact.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <bit>
#include <boost/graph/compressed_sparse_row_graph.hpp>
#include <boost/graph/strong_components.hpp>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include "nbattack/chain.hpp"
#include "nbattack/error.hpp"
#include "nbattack/observables.hpp"

namespace nbattack {

namespace {

constexpr std::uint64_t kPowerIterationCap = 1'000'000;
constexpr double kPowerIterationTolerance = 1e-14;

int node_sum_of(std::uint64_t mask, int n) { return 2 * std::popcount(mask) - n; }

}  // namespace

TransitionModel build_transition(const Graph& g, double p, int cap) {
  if (cap > kMaxStateCap) {
    throw Error(ErrorCode::state_space_too_large,
                "state cap " + std::to_string(cap) + " exceeds hard maximum " + std::to_string(kMaxStateCap));
  }
  if (g.size() > cap) {
    throw Error(ErrorCode::state_space_too_large,
                "N = " + std::to_string(g.size()) + " exceeds the exact-enumeration cap " + std::to_string(cap));
  }
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::invalid_params, "coin weight p must lie in (0,1)");

  TransitionModel t;
  t.n = g.size();
  t.r = g.degree();
  t.p = p;
  const int n = t.n;
  std::vector<std::uint32_t> masks(n, 0);
  for (int k = 0; k < n; ++k) {
    for (int j : g.closed_neighborhood(k)) masks[k] |= 1U << j;
  }

  const std::size_t states = t.state_count();
  t.row_start.reserve(states + 1);
  t.row_start.push_back(0);
  struct Hit {
    std::uint32_t target;
    std::uint8_t plus, minus;
  };
  std::vector<Hit> row;
  for (std::uint32_t x = 0; x < states; ++x) {
    row.clear();
    for (int k = 0; k < n; ++k) {
      row.push_back({x | masks[k], 1, 0});
      row.push_back({x & ~masks[k], 0, 1});
    }
    std::sort(row.begin(), row.end(), [](const Hit& a, const Hit& b) { return a.target < b.target; });
    for (std::size_t i = 0; i < row.size();) {
      Hit merged = row[i];
      std::size_t j = i + 1;
      for (; j < row.size() && row[j].target == merged.target; ++j) {
        merged.plus = static_cast<std::uint8_t>(merged.plus + row[j].plus);
        merged.minus = static_cast<std::uint8_t>(merged.minus + row[j].minus);
      }
      t.target.push_back(merged.target);
      t.plus_hits.push_back(merged.plus);
      t.minus_hits.push_back(merged.minus);
      i = j;
    }
    t.row_start.push_back(static_cast<std::uint32_t>(t.target.size()));
  }
  return t;
}

std::vector<std::uint32_t> recurrent_class(const TransitionModel& t) {
  using CsrGraph = boost::compressed_sparse_row_graph<boost::directedS>;
  const std::size_t states = t.state_count();

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(t.target.size());
  for (std::uint32_t x = 0; x < states; ++x) {
    for (std::uint32_t e = t.row_start[x]; e < t.row_start[x + 1]; ++e) {
      if (t.probability(e) > 0.0) edges.emplace_back(x, t.target[e]);
    }
  }
  const CsrGraph digraph(boost::edges_are_sorted, edges.begin(), edges.end(), states);

  std::vector<std::size_t> component(states);
  const std::size_t count = boost::strong_components(
      digraph, boost::make_iterator_property_map(component.begin(), boost::get(boost::vertex_index, digraph)));

  // A component is closed when no positive-probability edge leaves it.
  std::vector<char> open(count, 0);
  for (const auto& [from, to] : edges) {
    if (component[from] != component[to]) open[component[from]] = 1;
  }
  std::vector<std::size_t> closed;
  for (std::size_t c = 0; c < count; ++c) {
    if (!open[c]) closed.push_back(c);
  }
  if (closed.size() != 1) {
    throw Error(ErrorCode::multiple_closed_classes,
                "found " + std::to_string(closed.size()) + " closed communicating classes");
  }
  std::vector<std::uint32_t> cls;
  for (std::uint32_t x = 0; x < states; ++x) {
    if (component[x] == closed.front()) cls.push_back(x);
  }
  return cls;
}

double stationarity_residual(const TransitionModel& t, const std::vector<double>& pi) {
  std::vector<double> next(pi.size(), 0.0);
  for (std::size_t x = 0; x < pi.size(); ++x) {
    if (pi[x] == 0.0) continue;
    for (std::uint32_t e = t.row_start[x]; e < t.row_start[x + 1]; ++e) next[t.target[e]] += pi[x] * t.probability(e);
  }
  double worst = 0.0;
  for (std::size_t x = 0; x < pi.size(); ++x) worst = std::max(worst, std::abs(next[x] - pi[x]));
  return worst;
}

namespace {

/// One application of pi <- pi P restricted to the (closed) class.
void apply_kernel(const TransitionModel& t, const std::vector<std::uint32_t>& cls,
                  const std::vector<std::int32_t>& local, const std::vector<double>& in, std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t a = 0; a < cls.size(); ++a) {
    const std::uint32_t x = cls[a];
    for (std::uint32_t e = t.row_start[x]; e < t.row_start[x + 1]; ++e) {
      out[local[t.target[e]]] += in[a] * t.probability(e);
    }
  }
}

void normalize(std::vector<double>& v) {
  double mass = 0.0;
  for (double& x : v) {
    if (x < 0.0) x = 0.0;
    mass += x;
  }
  for (double& x : v) x /= mass;
}

}  // namespace

StationaryDistribution stationary(const TransitionModel& t, const std::vector<std::uint32_t>& cls) {
  const std::size_t m = cls.size();
  if (m == 0) throw Error(ErrorCode::invalid_params, "empty recurrent class");
  std::vector<std::int32_t> local(t.state_count(), -1);
  for (std::size_t a = 0; a < m; ++a) local[cls[a]] = static_cast<std::int32_t>(a);

  StationaryDistribution dist;
  dist.n = t.n;
  dist.recurrent_class = cls;
  std::vector<double> weights(m, 0.0);

  if (m <= kDirectSolveLimit) {
    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    std::vector<Eigen::Triplet<double>> triplets;
    const auto last = static_cast<Eigen::Index>(m - 1);
    for (std::size_t a = 0; a < m; ++a) {
      const std::uint32_t x = cls[a];
      for (std::uint32_t e = t.row_start[x]; e < t.row_start[x + 1]; ++e) {
        const auto row = static_cast<Eigen::Index>(local[t.target[e]]);
        if (row != last) triplets.emplace_back(row, static_cast<Eigen::Index>(a), t.probability(e));
      }
      if (static_cast<Eigen::Index>(a) != last) triplets.emplace_back(a, a, -1.0);
      triplets.emplace_back(last, a, 1.0);
    }
    Eigen::SparseMatrix<double> system(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    system.setFromTriplets(triplets.begin(), triplets.end());
    system.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(system);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::convergence_failure, "sparse LU factorisation failed");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    rhs[last] = 1.0;
    const Eigen::VectorXd solution = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::convergence_failure, "sparse LU solve failed");
    for (std::size_t a = 0; a < m; ++a) weights[a] = solution[static_cast<Eigen::Index>(a)];
    normalize(weights);
    dist.method = "sparse-lu";
  } else {
    std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(m));
    std::vector<double> next(m);
    bool converged = false;
    for (std::uint64_t it = 1; it <= kPowerIterationCap; ++it) {
      apply_kernel(t, cls, local, weights, next);
      double change = 0.0;
      for (std::size_t a = 0; a < m; ++a) change = std::max(change, std::abs(next[a] - weights[a]));
      weights.swap(next);
      dist.iterations = it;
      if (change < kPowerIterationTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) throw Error(ErrorCode::convergence_failure, "power iteration hit its iteration cap");
    normalize(weights);
    dist.method = "power-iteration";
  }

  dist.pi.assign(t.state_count(), 0.0);
  for (std::size_t a = 0; a < m; ++a) dist.pi[cls[a]] = weights[a];
  double mass = 0.0;
  for (double w : dist.pi) mass += w;
  dist.mass_error = std::abs(mass - 1.0);
  dist.residual = stationarity_residual(t, dist.pi);
  return dist;
}

StationaryDistribution stationary(const TransitionModel& t) { return stationary(t, recurrent_class(t)); }

double flip_asymmetry(const StationaryDistribution& dist) {
  const std::uint64_t all = (std::uint64_t{1} << dist.n) - 1;
  double worst = 0.0;
  for (std::uint64_t x = 0; x < dist.pi.size(); ++x) worst = std::max(worst, std::abs(dist.pi[x] - dist.pi[x ^ all]));
  return worst;
}

ExactReport exact_functionals(const Graph& g, const NeighborhoodIndex& index, const StationaryDistribution& dist) {
  ExactReport rep;
  rep.n = g.size();
  rep.r = g.degree();
  rep.class_size = dist.recurrent_class.size();

  struct PerState {
    double w, y, eta, theta, m2, s2, pair;
  };
  std::vector<PerState> rows;
  rows.reserve(dist.recurrent_class.size());
  const double r1 = rep.r + 1.0;
  for (std::uint32_t x : dist.recurrent_class) {
    const double w = dist.pi[x];
    if (w == 0.0) continue;
    const SpinState s = SpinState::from_mask(rep.n, x);
    const QProfile q = q_profile(g, s);
    const PairCounts pc = pair_counts(index, s);
    const double s2 = static_cast<double>(q.square_sum());
    rows.push_back({w, static_cast<double>(node_sum(s)), static_cast<double>(pc.eta), static_cast<double>(pc.theta),
                    r1 * r1 + s2 / rep.n, s2, 2.0 * static_cast<double>(pc.alpha - pc.beta)});
  }

  double mass = 0.0;
  PerState mean{};
  for (const auto& row : rows) {
    mass += row.w;
    mean.y += row.w * row.y;
    mean.eta += row.w * row.eta;
    mean.theta += row.w * row.theta;
    mean.m2 += row.w * row.m2;
    mean.s2 += row.w * row.s2;
    mean.pair += row.w * row.pair;
  }
  for (double* f : {&mean.y, &mean.eta, &mean.theta, &mean.m2, &mean.s2, &mean.pair}) *f /= mass;

  std::map<int, std::pair<double, double>> by_level;  // Y -> (mass, mass * m2)
  for (const auto& row : rows) {
    const double w = row.w / mass;
    rep.var_y += w * (row.y - mean.y) * (row.y - mean.y);
    rep.cov_eta_theta += w * (row.eta - mean.eta) * (row.theta - mean.theta);
    rep.var_m2_state += w * (row.m2 - mean.m2) * (row.m2 - mean.m2);
    rep.var_square_sum += w * (row.s2 - mean.s2) * (row.s2 - mean.s2);
    rep.var_pair_route += w * (row.pair - mean.pair) * (row.pair - mean.pair);
    auto& level = by_level[static_cast<int>(row.y)];
    level.first += w;
    level.second += w * row.m2;
  }
  for (const auto& [y, level] : by_level) {
    const double cond = level.second / level.first;
    rep.var_m2_ylevel += level.first * (cond - mean.m2) * (cond - mean.m2);
  }
  rep.mean_y = mean.y;
  rep.mean_eta = mean.eta;
  rep.mean_theta = mean.theta;
  rep.mean_m2 = mean.m2;
  return rep;
}

LinearityCheck verify_linearity(const Graph& g, const TransitionModel& t) {
  if (t.p != 0.5) throw Error(ErrorCode::requires_symmetric_p, "linearity holds only for p = 1/2");
  const int n = t.n;
  const int r1 = g.degree() + 1;
  LinearityCheck check;
  for (std::uint64_t x = 0; x < t.state_count(); ++x) {
    const int y = node_sum_of(x, n);
    double expected_change = 0.0;
    std::int64_t weighted_change = 0;  // sum over the 2N equally likely (node, coin) outcomes
    for (std::uint32_t e = t.row_start[x]; e < t.row_start[x + 1]; ++e) {
      const int dy = node_sum_of(t.target[e], n) - y;
      expected_change += t.probability(e) * dy;
      weighted_change += static_cast<std::int64_t>(t.plus_hits[e] + t.minus_hits[e]) * dy;
    }
    // E[dY|x] = weighted_change / (2N) = -(r+1) y / N  <=>  weighted_change = -2 (r+1) y.
    if (weighted_change != -2LL * r1 * y) check.exact_identity_holds = false;
    const double deviation = std::abs(expected_change + static_cast<double>(r1) * y / n);
    if (deviation > check.max_abs_deviation) {
      check.max_abs_deviation = deviation;
      check.worst_state = x;
    }
    ++check.states_checked;
  }
  return check;
}

FkgReport fkg_violations(const StationaryDistribution& dist, std::size_t limit, std::uint64_t seed,
                         std::uint64_t pair_budget) {
  std::vector<std::uint64_t> support;
  for (std::uint64_t x = 0; x < dist.pi.size(); ++x) {
    if (dist.pi[x] > 0.0) support.push_back(x);
  }
  const std::uint64_t s = support.size();
  const std::uint64_t total_pairs = s < 2 ? 0 : s * (s - 1) / 2;

  FkgReport rep;
  rep.exhaustive = total_pairs <= pair_budget;
  const auto& pi = dist.pi;
  auto examine = [&](std::uint64_t x, std::uint64_t y) {
    ++rep.pairs_examined;
    const std::uint64_t meet = x & y;  // componentwise min: +1 only where both are +1
    const std::uint64_t join = x | y;
    if (meet == x || meet == y) return;  // comparable pairs give equality
    const double lhs = pi[meet] * pi[join];
    const double rhs = pi[x] * pi[y];
    if (lhs < rhs - kFkgTolerance) {
      ++rep.violations_found;
      rep.worst_gap = std::max(rep.worst_gap, rhs - lhs);
      if (rep.violations.size() < limit) rep.violations.push_back({x, y, meet, join, pi[x], pi[y], pi[meet], pi[join]});
    }
  };

  if (rep.exhaustive) {
    for (std::uint64_t a = 0; a < s; ++a) {
      for (std::uint64_t b = a + 1; b < s; ++b) examine(support[a], support[b]);
    }
  } else {
    // Selection sampling: each of the remaining pairs is taken with
    // probability (still needed) / (still available).
    std::mt19937_64 rng(splitmix64(seed));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uint64_t seen = 0;
    std::uint64_t taken = 0;
    for (std::uint64_t a = 0; a < s && taken < pair_budget; ++a) {
      for (std::uint64_t b = a + 1; b < s && taken < pair_budget; ++b, ++seen) {
        if (static_cast<double>(total_pairs - seen) * unit(rng) < static_cast<double>(pair_budget - taken)) {
          ++taken;
          examine(support[a], support[b]);
        }
      }
    }
  }
  return rep;
}

void write_pi_csv(std::ostream& os, const StationaryDistribution& dist) {
  os << "state,probability\n";
  char buf[64];
  for (std::uint64_t x = 0; x < dist.pi.size(); ++x) {
    if (dist.pi[x] <= 0.0) continue;
    std::snprintf(buf, sizeof buf, "%.17g", dist.pi[x]);
    os << x << ',' << buf << '\n';
  }
}

}  // namespace nbattack
