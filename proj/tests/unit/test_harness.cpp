#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "heavynet/eigensolvers.hpp"
#include "heavynet/harness.hpp"

using namespace heavynet;

namespace {

const ConvergenceReport& small_sweep() {
  static const ConvergenceReport r =
      sweep_convergence(make_target({1.0, 3.0}, 0.5, 5), BlockModel::single_node(2), {4, 5}, 0);
  return r;
}

}  // namespace

TEST(Sweep, RowsMatchAnIndependentDenseSolve) {
  const ConvergenceReport& r = small_sweep();
  ASSERT_EQ(r.rows.size(), 2u);
  const ConvergenceRow& row = r.rows[0];
  ASSERT_TRUE(row.ok) << row.error;
  EXPECT_EQ(row.method, "dense");
  const MacroNetwork net = assemble_network(r.target, r.weights, BlockModel::single_node(2), r.colors, 4,
                                            derive_seed(0, 4, 4));
  EXPECT_EQ(net.graph.vertex_count(), row.nodes);
  const EigenResult eig = spectrum_dense(net.graph, false);
  ASSERT_EQ(row.nu.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_NEAR(row.nu[k], eig.eigenvalues[static_cast<Eigen::Index>(k)], 1e-10);
    EXPECT_NEAR(row.rescaled[k], 256.0 * row.nu[k], 1e-12 * std::max(1.0, row.rescaled[k]));
  }
  EXPECT_NEAR(row.parasitic, 16.0 * row.nu[5], 1e-15);
  for (std::size_t k = 0; k + 1 < 5; ++k) {
    EXPECT_NEAR(row.ratios[k], row.nu[k + 1] / row.macro[k + 1], 1e-12);
  }
  EXPECT_NEAR(row.flatness_guard * row.min_cluster_gap, 1.0, 1e-12);
}

TEST(Sweep, ProfilesAreFractionsOfUnitMass) {
  const ConvergenceReport& r = small_sweep();
  for (const ConvergenceRow& row : r.rows) {
    ASSERT_TRUE(row.ok) << row.error;
    for (double x : row.corridor_mass) {
      EXPECT_GE(x, -1e-12);
      EXPECT_LE(x, 1.0 + 1e-9);
    }
    for (double x : row.flatness) {
      EXPECT_GE(x, -1e-12);
      EXPECT_LE(x, 1.0 + 1e-9);
    }
    EXPECT_NEAR(row.flatness[0], 0.0, 1e-9);
  }
  EXPECT_FALSE(r.verdicts.empty());
  EXPECT_EQ(r.largest_ok(), &r.rows.back());
}

TEST(Sweep, ConstantVectorProfiles) {
  const ConvergenceReport& r = small_sweep();
  const MacroNetwork net =
      assemble_network(r.target, r.weights, BlockModel::single_node(2), r.colors, 4, 1);
  EigenResult eig;
  eig.eigenvalues = Eigen::VectorXd::Zero(1);
  eig.eigenvectors = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(net.graph.vertex_count()), 1);
  double corridor = 0.0;
  for (NodeId x = 0; x < net.graph.vertex_count(); ++x) {
    if (net.is_corridor_node(x)) corridor += net.graph.measures()[x];
  }
  EXPECT_NEAR(corridor_mass_profile(net, eig)[0], corridor / net.graph.total_measure(), 1e-12);
  EXPECT_NEAR(cluster_flatness_profile(net, eig)[0], 0.0, 1e-14);
  EigenResult bare;
  bare.eigenvalues = Eigen::VectorXd::Zero(1);
  EXPECT_ERROR_CODE(corridor_mass_profile(net, bare), ErrorCode::kInvalidArgument);
}

TEST(Sweep, StageFailuresAreRecordedPerRow) {
  const ConvergenceReport r =
      sweep_convergence(make_target({1.0, 3.0}, 0.5, 5), BlockModel::single_node(2), {1, 4}, 0);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_FALSE(r.rows[0].ok);
  EXPECT_NE(r.rows[0].error.find("empty corridor"), std::string::npos);
  EXPECT_TRUE(r.rows[1].ok);
  EXPECT_ERROR_CODE(sweep_convergence(make_target({1.0, 3.0}, 0.5, 5), BlockModel::single_node(2), {8, 4}, 0),
                    ErrorCode::kInvalidArgument);
}

TEST(LogLogSlope, RecoversPowerLaws) {
  EXPECT_NEAR(log_log_slope({1, 2, 4, 8}, {3, 1.5, 0.75, 0.375}), -1.0, 1e-12);
  EXPECT_NEAR(log_log_slope({2, 3, 5}, {4, 9, 25}), 2.0, 1e-12);
  EXPECT_TRUE(std::isnan(log_log_slope({1}, {1})));
}

TEST(RatioRow, ExactTargetsHaveZeroError) {
  const SpectralTarget t = make_target({2.0, 5.0, 7.0});
  const RatioRow row = ratio_row(t, 8, {2.0, 5.0, 7.0});
  EXPECT_DOUBLE_EQ(row.delta, 0.0);
  EXPECT_DOUBLE_EQ(row.max_ratio_error, 0.0);
  EXPECT_TRUE(row.bound_holds);
  EXPECT_TRUE(row.epsilon_holds);
}

TEST(RatioRow, PerturbedFirstEigenvalue) {
  const SpectralTarget t = make_target({1.0, 3.0});
  const RatioRow row = ratio_row(t, 8, {1.1, 3.0});
  EXPECT_NEAR(row.delta, 0.1, 1e-12);
  EXPECT_NEAR(row.ratios[1], 3.0 / 1.1, 1e-12);
  EXPECT_NEAR(row.max_ratio_error, 3.0 - 3.0 / 1.1, 1e-12);
  EXPECT_TRUE(row.delta_qualifies);
  EXPECT_NEAR(row.bound, 0.8, 1e-12);
  EXPECT_TRUE(row.bound_holds);
  EXPECT_NEAR(row.epsilon_delta, 0.0625, 1e-12);
  EXPECT_ERROR_CODE(ratio_row(t, 8, {1.0}), ErrorCode::kDimensionMismatch);
}

TEST(RatioRow, BoundHoldsOnRandomPerturbations) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  const SpectralTarget t = make_target({1.0, 1.7, 2.4, 4.0});
  for (int trial = 0; trial < 500; ++trial) {
    const double scale = std::abs(jitter(rng));
    std::vector<double> measured;
    for (double x : t.targets) measured.push_back(x + scale * jitter(rng));
    const RatioRow row = ratio_row(t, 8, measured);
    if (row.delta_qualifies) EXPECT_LE(row.max_ratio_error, row.bound + 1e-12);
    EXPECT_TRUE(row.epsilon_holds);
  }
}

TEST(PathExample, AllChecksPass) {
  const Example013Report r = example_013();
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.genus, 3u);
  ASSERT_EQ(r.rescaled.size(), 3u);
  EXPECT_NEAR(r.rescaled[2][2] / r.rescaled[2][1], 3.0, 1e-9);
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.value;
}
