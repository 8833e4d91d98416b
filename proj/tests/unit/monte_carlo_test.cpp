// Chain + estimators against the exact oracle on small instances.

#include <gtest/gtest.h>

#include "nbattack/experiment.hpp"

namespace nbattack {
namespace {

struct Case {
  FamilySpec spec;
  std::uint64_t seed;
};

class MonteCarloVsExact : public ::testing::TestWithParam<Case> {};

TEST_P(MonteCarloVsExact, WithinThreeStandardErrors) {
  const Case c = GetParam();
  const Graph g = build_family(c.spec);
  const NeighborhoodIndex idx = build_neighborhood_index(g);
  const ExactSolution exact = solve_exact(g, idx, 0.5);

  ChainConfig cfg{0.5, c.seed, default_burn_in(g.size()), default_thinning(g.size()), 50000, 4};
  const SimulationResult sim = simulate_chain(g, idx, cfg, {false, 0});
  const EstimateReport& e = sim.estimates;
  ASSERT_EQ(e.count, 200000u);
  ASSERT_EQ(e.se_method, "batch-means");

  EXPECT_LE(std::abs(z_score(e.var_y_hat, exact.report.var_y, e.se_var_y)), 3.0)
      << c.spec.label() << " var_y " << e.var_y_hat << " vs " << exact.report.var_y;
  EXPECT_LE(std::abs(z_score(e.cov_eta_theta_hat, exact.report.cov_eta_theta, e.se_cov_eta_theta)), 3.0)
      << c.spec.label() << " cov " << e.cov_eta_theta_hat << " vs " << exact.report.cov_eta_theta;
  EXPECT_LE(std::abs(z_score(e.var_cond_m2_hat, exact.report.var_m2_state, e.se_var_cond_m2)), 3.0)
      << c.spec.label() << " m2 " << e.var_cond_m2_hat << " vs " << exact.report.var_m2_state;
  EXPECT_LE(std::abs(z_score(e.mean_y, 0.0, e.se_mean_y)), 3.0) << c.spec.label();

  // Bracket consistency of the estimate.
  const double r1 = g.degree() + 1.0;
  EXPECT_GE(e.var_y_hat + 3 * e.se_var_y, r1 * g.size() / 2);
  EXPECT_LE(e.var_y_hat - 3 * e.se_var_y, r1 * g.size());
}

INSTANTIATE_TEST_SUITE_P(SmallInstances, MonteCarloVsExact,
                         ::testing::Values(Case{FamilySpec::circle(5), 1}, Case{FamilySpec::circle(6), 2},
                                           Case{FamilySpec::circle(9), 3}, Case{FamilySpec::complete(4), 4},
                                           Case{FamilySpec::hypercube(3), 5},
                                           Case{FamilySpec::circulant(10, {1, 3}), 6},
                                           Case{FamilySpec::complete_bipartite(3), 7}),
                         [](const auto& info) {
                           std::string name = std::string(to_string(info.param.spec.kind)) + "_" +
                                              std::to_string(info.param.spec.size_param());
                           return name;
                         });

TEST(Simulation, ReplicaOrderIndependentOfThreads) {
  const Graph g = build_family(FamilySpec::circle(12));
  const NeighborhoodIndex idx = build_neighborhood_index(g);
  ChainConfig cfg{0.5, 9, 100, 12, 300, 3};
  const auto one = simulate_chain(g, idx, cfg, {true, 1});
  const auto many = simulate_chain(g, idx, cfg, {true, 3});
  EXPECT_EQ(one.node_sums, many.node_sums);
  EXPECT_EQ(one.estimates.var_y_hat, many.estimates.var_y_hat);
  ASSERT_EQ(one.rows.size(), 900u);
  EXPECT_EQ(one.rows[300].replica, 1u);
  EXPECT_EQ(one.rows[300].index, 0u);
}

TEST(Simulation, GeneralCoinAgreesWithExactMean) {
  const Graph g = build_family(FamilySpec::circle(7));
  const NeighborhoodIndex idx = build_neighborhood_index(g);
  const ExactSolution exact = solve_exact(g, idx, 0.3);
  ChainConfig cfg{0.3, 12, 500, 7, 40000, 2};
  const auto sim = simulate_chain(g, idx, cfg, {false, 0});
  EXPECT_LE(std::abs(z_score(sim.estimates.mean_y, exact.report.mean_y, sim.estimates.se_mean_y)), 3.0);
  EXPECT_LT(exact.report.mean_y, 0.0);
}

TEST(Simulation, Distances) {
  const Distances d = normal_distances({-2, 0, 2}, 2.0, InputSource::exact);
  EXPECT_EQ(d.normalization, InputSource::exact);
  EXPECT_GT(d.wasserstein1, 0.0);
  EXPECT_EQ(z_score(1.0, 1.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(z_score(1.0, 2.0, 0.0)));
}

}  // namespace
}  // namespace nbattack
