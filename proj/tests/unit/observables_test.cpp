#include <gtest/gtest.h>

#include <map>

#include "nbattack/error.hpp"
#include "nbattack/observables.hpp"
#include "support/oracles.hpp"

namespace nbattack {
namespace {

SpinState spins(std::initializer_list<int> v) {
  std::vector<std::int8_t> out;
  for (int x : v) out.push_back(static_cast<std::int8_t>(x));
  return SpinState(std::move(out));
}

/// Oracle pmf: each of the 2N outcomes weighted p/N or (1-p)/N.
std::map<int, Rational> enumerated_pmf(const Graph& g, const SpinState& s, Rational p) {
  const auto deltas = testing::all_outcome_deltas(g, s);
  const std::int64_t n = g.size();
  std::map<int, Rational> pmf;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const Rational w = k < static_cast<std::size_t>(n) ? p : Rational(1) - p;
    pmf[static_cast<int>(deltas[k])] += w * Rational(1, n);
  }
  return pmf;
}

TEST(Observables, NodeSum) {
  EXPECT_EQ(node_sum(SpinState(5, 1)), 5);
  EXPECT_EQ(node_sum(spins({1, -1, 1, -1, 1, -1})), 0);
  EXPECT_EQ(node_sum(spins({1, 1, -1, -1, -1})), -1);
}

TEST(Observables, QProfileExamples) {
  const Graph c5 = build_family(FamilySpec::circle(5));
  const QProfile all_plus = q_profile(c5, SpinState(5, 1));
  EXPECT_EQ(all_plus.count(3), 5);
  EXPECT_EQ(all_plus.weighted_sum(), 15);

  const QProfile q = q_profile(c5, spins({1, -1, -1, -1, -1}));
  EXPECT_EQ(q.count(-3), 2);
  EXPECT_EQ(q.count(-1), 3);
  EXPECT_EQ(q.count(1), 0);
  EXPECT_EQ(q.count(3), 0);
  EXPECT_EQ(q.count(0), 0);  // wrong parity
  EXPECT_EQ(q.count(99), 0);
  EXPECT_EQ(q.support(), (std::vector<int>{-3, -1, 1, 3}));

  const QProfile k4 = q_profile(build_family(FamilySpec::complete(4)), SpinState(4, -1));
  EXPECT_EQ(k4.count(-4), 4);
  EXPECT_EQ(k4.total(), 4);
}

TEST(Observables, QProfileRejectsMalformedCounts) {
  EXPECT_THROW(QProfile(2, {1, 2}), Error);
  EXPECT_THROW(QProfile(2, {1, -1, 0, 0}), Error);
  EXPECT_THROW(QProfile(0, {1, 1}), Error);
}

TEST(Observables, DeltaPmfAllPlus) {
  const Graph c5 = build_family(FamilySpec::circle(5));
  const QProfile q = q_profile(c5, SpinState(5, 1));
  const auto pmf = delta_y_pmf(q);
  EXPECT_EQ(pmf, (std::map<int, Rational>{{-6, Rational(1, 2)}, {0, Rational(1, 2)}}));
  const Rational p(1, 3);
  EXPECT_EQ(delta_y_pmf(q, p), (std::map<int, Rational>{{-6, Rational(2, 3)}, {0, p}}));
}

TEST(Observables, DeltaPmfMixedStateMatchesEnumeration) {
  const Graph c5 = build_family(FamilySpec::circle(5));
  const SpinState s = spins({1, -1, -1, -1, -1});
  const auto pmf = delta_y_pmf(q_profile(c5, s));
  // i = -3 (two nodes): +6 or 0; i = -1 (three nodes): +4 or -2.
  const std::map<int, Rational> expected{
      {6, Rational(1, 5)}, {0, Rational(1, 5)}, {4, Rational(3, 10)}, {-2, Rational(3, 10)}};
  EXPECT_EQ(pmf, expected);
  EXPECT_EQ(pmf, enumerated_pmf(c5, s, Rational(1, 2)));
}

TEST(Observables, DeltaPmfMergesCoincidingValues) {
  // A state with both i = r+1 and i = -(r+1) neighborhoods sends both to 0.
  const Graph c6 = build_family(FamilySpec::circle(6));
  const SpinState s = spins({1, 1, 1, -1, -1, -1});
  const auto pmf = delta_y_pmf(q_profile(c6, s));
  EXPECT_EQ(pmf, enumerated_pmf(c6, s, Rational(1, 2)));
  Rational total;
  for (const auto& [v, w] : pmf) total += w;
  EXPECT_EQ(total, Rational(1));
}

TEST(Observables, ConditionalMeanExamples) {
  const Graph c5 = build_family(FamilySpec::circle(5));
  EXPECT_EQ(cond_mean_delta_y(q_profile(c5, SpinState(5, 1))), Rational(-3));
  EXPECT_EQ(cond_mean_delta_y(q_profile(c5, spins({1, -1, -1, -1, -1}))), Rational(9, 5));
  const Graph c6 = build_family(FamilySpec::circle(6));
  EXPECT_EQ(cond_mean_delta_y(q_profile(c6, spins({1, -1, 1, -1, 1, -1}))), Rational(0));
}

TEST(Observables, ConditionalSecondMomentExamples) {
  const Graph c5 = build_family(FamilySpec::circle(5));
  EXPECT_EQ(cond_second_moment_delta_y(q_profile(c5, SpinState(5, 1))), Rational(18));
  const Graph k2 = build_family(FamilySpec::complete(2));
  EXPECT_EQ(cond_second_moment_delta_y(q_profile(k2, SpinState(2, -1))), Rational(8));
}

TEST(Observables, AsymmetricCoinIsRefusedForMoments) {
  const Graph c5 = build_family(FamilySpec::circle(5));
  const QProfile q = q_profile(c5, SpinState(5, 1));
  for (auto fn : {cond_mean_delta_y, cond_second_moment_delta_y}) {
    try {
      fn(q, Rational(1, 3));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::requires_symmetric_p);
    }
  }
  EXPECT_THROW(delta_y_pmf(q, Rational(0)), Error);
}

TEST(Observables, PairCountExamples) {
  const Graph c5 = build_family(FamilySpec::circle(5));
  const NeighborhoodIndex i5 = build_neighborhood_index(c5);
  EXPECT_EQ(pair_counts(i5, SpinState(5, 1)), (PairCounts{10, 0, 10, 0}));
  EXPECT_EQ(pair_counts(i5, SpinState(5, -1)), (PairCounts{10, 0, 0, 10}));
  const NeighborhoodIndex i6 = build_neighborhood_index(build_family(FamilySpec::circle(6)));
  EXPECT_EQ(pair_counts(i6, spins({1, -1, 1, -1, 1, -1})), (PairCounts{6, 6, 3, 3}));
}

TEST(Observables, NormalizeW) {
  EXPECT_EQ(normalize_w(0, 3.0), 0.0);
  EXPECT_EQ(normalize_w(4, 4.0), 1.0);
  EXPECT_EQ(normalize_w(-4, 4.0), -1.0);
  try {
    normalize_w(1, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::nonpositive_sigma);
  }
}

// Random states on every family instance: exact identities and agreement with
// the outcome enumeration oracle.
TEST(ObservablesProperty, IdentitiesOnRandomStates) {
  std::mt19937_64 rng(2024);
  for (const FamilySpec& spec : testing::property_families()) {
    const Graph g = build_family(spec);
    const NeighborhoodIndex idx = build_neighborhood_index(g);
    const std::int64_t n = g.size();
    const std::int64_t r = g.degree();
    const int trials = n <= 16 ? 2000 : 300;
    for (int t = 0; t < trials; ++t) {
      const SpinState s = testing::random_state(g.size(), rng);
      const std::int64_t y = testing::sum_of(testing::as_ints(s));
      const QProfile q = q_profile(g, s);
      ASSERT_EQ(q.total(), n);
      ASSERT_EQ(q.weighted_sum(), (r + 1) * y);

      const auto pmf = delta_y_pmf(q);
      Rational mass, mean, second;
      for (const auto& [v, w] : pmf) {
        ASSERT_LE(std::abs(v), 2 * (r + 1));
        mass += w;
        mean += w * Rational(v);
        second += w * Rational(static_cast<std::int64_t>(v) * v);
      }
      ASSERT_EQ(mass, Rational(1));
      ASSERT_EQ(mean, cond_mean_delta_y(q));
      ASSERT_EQ(mean, Rational(-(r + 1) * y, n));
      ASSERT_EQ(second, cond_second_moment_delta_y(q));
      ASSERT_LE(second, Rational(2 * (r + 1) * (r + 1)));

      // Averaging the realised change over all 2N outcomes.
      const auto deltas = testing::all_outcome_deltas(g, s);
      std::int64_t total = 0;
      for (long long d : deltas) total += d;
      ASSERT_EQ(Rational(total, 2 * n), cond_mean_delta_y(q));
      ASSERT_EQ(pmf, enumerated_pmf(g, s, Rational(1, 2))) << spec.label();

      if (idx.r_star) {
        const PairCounts pc = pair_counts(idx, s);
        ASSERT_EQ(pc.alpha, pc.eta + pc.theta);
        ASSERT_EQ(2 * (pc.alpha + pc.beta), *idx.r_star * n);
        ASSERT_EQ(2 * (pc.eta - pc.theta), *idx.r_star * y);
      }
    }
  }
}

TEST(ObservablesProperty, GeneralCoinPmfMatchesEnumeration) {
  std::mt19937_64 rng(5);
  const Graph g = build_family(FamilySpec::circulant(12, {1, 3}));
  for (Rational p : {Rational(1, 3), Rational(7, 10)}) {
    for (int t = 0; t < 200; ++t) {
      const SpinState s = testing::random_state(g.size(), rng);
      ASSERT_EQ(delta_y_pmf(q_profile(g, s), p), enumerated_pmf(g, s, p));
    }
  }
}

}  // namespace
}  // namespace nbattack
