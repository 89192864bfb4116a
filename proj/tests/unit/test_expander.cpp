#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "corpus.hpp"
#include "expect_error.hpp"
#include "heavynet/expander.hpp"

using namespace heavynet;
using heavynet::testing::corpus;

namespace {

Eigen::MatrixXd adjacency(const MeasuredGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    a(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = 1.0;
    a(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = 1.0;
  }
  return a;
}

MeasuredGraph unit_graph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  std::vector<Edge> edges;
  for (auto [u, v] : pairs) edges.push_back({u, v, 1.0, {}});
  return MeasuredGraph::with_unit_measures(n, edges);
}

}  // namespace

class WiringSizes : public ::testing::TestWithParam<std::pair<std::size_t, std::size_t>> {};

TEST_P(WiringSizes, SimpleRegularConnectedAndWithinGapBound) {
  const auto [size, D] = GetParam();
  const ClusterWiring w = sample_wiring(size, D, 11);
  const MeasuredGraph g = w.graph(false);
  ASSERT_EQ(g.edge_count(), size * D) << "parallel edges were merged";
  for (NodeId v = 0; v < size; ++v) EXPECT_EQ(g.degree(v), 2 * D);
  EXPECT_TRUE(g.connected());
  for (std::size_t i = 0; i < D; ++i) {
    std::vector<NodeId> sorted = w.permutations[i];
    std::sort(sorted.begin(), sorted.end());
    for (NodeId t = 0; t < size; ++t) {
      EXPECT_EQ(sorted[t], t);
      EXPECT_NE(w.permutations[i][t], t);
    }
  }
  // independent adjacency spectrum
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(adjacency(g), Eigen::EigenvaluesOnly).eigenvalues();
  const double lambda2 = ev[ev.size() - 2];
  EXPECT_NEAR(ev[ev.size() - 1], 2.0 * static_cast<double>(D), 1e-9);
  EXPECT_NEAR(lambda2, w.gap.adjacency_lambda2, 1e-7);
  EXPECT_LE(lambda2, 2.0 * std::sqrt(2.0 * static_cast<double>(D) - 1.0) + 0.5);
}

INSTANTIATE_TEST_SUITE_P(Sizes, WiringSizes,
                         ::testing::Values(std::make_pair(std::size_t{64}, std::size_t{2}),
                                           std::make_pair(std::size_t{125}, std::size_t{3}),
                                           std::make_pair(std::size_t{216}, std::size_t{2})));

TEST(Wiring, RejectsSmallClusters) {
  EXPECT_ERROR_CODE(sample_wiring(8, 2, 0), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(sample_wiring(12, 3, 0), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(sample_wiring(64, 1, 0), ErrorCode::kInvalidArgument);
}

TEST(Wiring, IsDeterministicPerSeed) {
  const ClusterWiring a = sample_wiring(64, 2, 5);
  const ClusterWiring b = sample_wiring(64, 2, 5);
  const ClusterWiring c = sample_wiring(64, 2, 6);
  EXPECT_EQ(a.permutations, b.permutations);
  EXPECT_NE(a.permutations, c.permutations);
}

TEST(Wiring, ImpossibleGapExhaustsBudget) {
  WiringOptions o;
  o.gap_slack = -10.0;
  o.resample_budget = 3;
  EXPECT_ERROR_CODE(sample_wiring(64, 2, 0, o), ErrorCode::kResampleBudget);
}

TEST(Ports, DisjointAndConnectedAfterDeletion) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ClusterWiring w = expose_ports(sample_wiring(64, 2, seed), seed);
    ASSERT_EQ(w.ports.size(), 2u);
    std::set<NodeId> touched;
    for (const PortEdge& p : w.ports) {
      EXPECT_EQ(w.permutations[p.color][p.out_node], p.in_node);
      touched.insert(p.out_node);
      touched.insert(p.in_node);
    }
    EXPECT_EQ(touched.size(), 4u);
    const MeasuredGraph g = w.graph(true);
    EXPECT_TRUE(g.connected());
    EXPECT_EQ(g.edge_count(), 64u * 2 - 2);
    std::size_t deg3 = 0;
    for (NodeId v = 0; v < 64; ++v) {
      if (g.degree(v) == 3) {
        ++deg3;
        EXPECT_TRUE(touched.count(v));
      } else {
        EXPECT_EQ(g.degree(v), 4u);
      }
    }
    EXPECT_EQ(deg3, 4u);
    EXPECT_GT(w.gap.lambda1_after, 0.0);
    EXPECT_LE(w.gap.lambda1_after, w.gap.lambda1_before + 1e-9);
  }
}

TEST(Ports, DeterministicAndNotReexposed) {
  const ClusterWiring w = sample_wiring(64, 2, 1);
  const ClusterWiring a = expose_ports(w, 9);
  const ClusterWiring b = expose_ports(w, 9);
  ASSERT_EQ(a.ports.size(), b.ports.size());
  for (std::size_t i = 0; i < a.ports.size(); ++i) {
    EXPECT_EQ(a.ports[i].out_node, b.ports[i].out_node);
    EXPECT_EQ(a.ports[i].in_node, b.ports[i].in_node);
  }
  EXPECT_ERROR_CODE(expose_ports(a, 9), ErrorCode::kInvalidArgument);
}

TEST(Cheeger, ExactSmallCases) {
  EXPECT_DOUBLE_EQ(cheeger_exact(unit_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})), 1.0);
  EXPECT_DOUBLE_EQ(cheeger_exact(unit_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})), 2.0);
  EXPECT_DOUBLE_EQ(cheeger_exact(unit_graph(4, {{0, 1}, {2, 3}})), 0.0);
  EXPECT_DOUBLE_EQ(cheeger_exact(unit_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})), 0.5);
}

TEST(Cheeger, ExactRejectsLargeGraphs) {
  std::vector<std::pair<NodeId, NodeId>> path;
  for (NodeId i = 0; i + 1 < 21; ++i) path.push_back({i, i + 1});
  EXPECT_ERROR_CODE(cheeger_exact(unit_graph(21, path)), ErrorCode::kSizeTooLarge);
}

TEST(Cheeger, SpectralBoundsOnSmallCases) {
  const CheegerBounds k4 = cheeger_bounds(unit_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  EXPECT_NEAR(k4.lambda1, 4.0, 1e-9);
  EXPECT_NEAR(k4.lower, 2.0, 1e-9);
  EXPECT_NEAR(k4.upper, std::sqrt(8.0), 1e-9);
  const CheegerBounds c4 = cheeger_bounds(unit_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  EXPECT_NEAR(c4.lower, 1.0, 1e-9);
  EXPECT_ERROR_CODE(cheeger_bounds(unit_graph(4, {{0, 1}, {2, 3}})), ErrorCode::kDisconnected);
}

TEST(Cheeger, BoundsBracketExactValueOnCorpus) {
  for (const auto& [name, g] : corpus()) {
    if (g.vertex_count() > 20 || g.vertex_count() < 2) continue;
    const double h = cheeger_exact(g);
    const CheegerBounds b = cheeger_bounds(g);
    EXPECT_LE(b.lower, h + 1e-9) << name;
    EXPECT_LE(h, b.upper + 1e-9) << name;
  }
}

TEST(Cheeger, BoundsBracketExactValueOnSmallWirings) {
  // small enough for exhaustive enumeration
  for (std::size_t size : {9u, 12u, 16u, 20u}) {
    const ClusterWiring w = expose_ports(sample_wiring(size, 2, size), 1);
    const MeasuredGraph g = w.graph(true);
    const double h = cheeger_exact(g);
    const CheegerBounds b = cheeger_bounds(g);
    EXPECT_LE(b.lower, h + 1e-9);
    EXPECT_LE(h, b.upper + 1e-9);
    EXPECT_NEAR(b.lambda1, w.gap.lambda1_after, 1e-7);
  }
}

TEST(WiringJson, RoundTrip) {
  const ClusterWiring w = expose_ports(sample_wiring(64, 2, 3), 4);
  const ClusterWiring back = read_wiring_json(write_wiring_json(w));
  EXPECT_EQ(back.permutations, w.permutations);
  EXPECT_EQ(back.size, w.size);
  EXPECT_EQ(back.D, w.D);
  ASSERT_EQ(back.ports.size(), w.ports.size());
  EXPECT_EQ(back.ports[1].in_node, w.ports[1].in_node);
  EXPECT_DOUBLE_EQ(back.gap.lambda1_after, w.gap.lambda1_after);
  EXPECT_ERROR_CODE(read_wiring_json("{\"size\": 3}"), ErrorCode::kParse);
}
