#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "expect_error.hpp"
#include "heavynet/eigensolvers.hpp"
#include "heavynet/laplacian.hpp"
#include "heavynet/measured_graph.hpp"

using namespace heavynet;
using heavynet::testing::corpus;
using heavynet::testing::random_connected_graph;

namespace {

MeasuredGraph two_vertices(double w) {
  const Edge e{0, 1, w, {}};
  return MeasuredGraph::with_unit_measures(2, std::span<const Edge>(&e, 1));
}

MeasuredGraph complete_unit(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0, {}});
  }
  return MeasuredGraph::with_unit_measures(n, edges);
}

}  // namespace

TEST(MeasuredGraph, CanonicalizesAndMergesParallelEdges) {
  const std::vector<Edge> edges = {{2, 0, 1.0, {}}, {0, 2, 0.5, {}}, {1, 1, 4.0, {}}, {1, 2, 2.0, {}}};
  const MeasuredGraph g({1.0, 2.0, 3.0}, edges);
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges()[0].u, 0u);
  EXPECT_EQ(g.edges()[0].v, 2u);
  EXPECT_DOUBLE_EQ(g.weight(2, 0), 1.5);
  EXPECT_DOUBLE_EQ(g.weight(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(g.weighted_degree(2), 3.5);
  EXPECT_EQ(g.degree(2), 2u);
  EXPECT_DOUBLE_EQ(g.total_measure(), 6.0);
}

TEST(MeasuredGraph, RejectsBadInput) {
  const std::vector<Edge> bad_weight = {{0, 1, -1.0, {}}};
  EXPECT_ERROR_CODE(MeasuredGraph({1.0, 1.0}, bad_weight), ErrorCode::kInvalidArgument);
  const std::vector<Edge> out_of_range = {{0, 5, 1.0, {}}};
  EXPECT_ERROR_CODE(MeasuredGraph({1.0, 1.0}, out_of_range), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(MeasuredGraph({1.0, 0.0}, {}), ErrorCode::kInvalidArgument);
}

TEST(MeasuredGraph, ComponentsAndInducedSubgraph) {
  const std::vector<Edge> edges = {{0, 1, 1.0, {}}, {2, 3, 1.0, {}}};
  const MeasuredGraph g = MeasuredGraph::with_unit_measures(4, edges);
  EXPECT_EQ(g.component_count(), 2u);
  EXPECT_FALSE(g.connected());
  const std::vector<NodeId> keep = {3, 2};
  const MeasuredGraph h = g.induced(keep);
  EXPECT_EQ(h.vertex_count(), 2u);
  EXPECT_DOUBLE_EQ(h.weight(0, 1), 1.0);
  EXPECT_TRUE(h.connected());
}

TEST(Laplacian, TwoVertexApply) {
  const MeasuredGraph g = two_vertices(1.0);
  const Eigen::VectorXd out = laplacian_apply(g, Eigen::Vector2d(1.0, 0.0));
  EXPECT_DOUBLE_EQ(out[0], 1.0);
  EXPECT_DOUBLE_EQ(out[1], -1.0);
}

TEST(Laplacian, ConstantsAreInTheKernel) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const MeasuredGraph g = random_connected_graph(rng, 3 + trial, 2 * trial);
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.vertex_count()), 2.5);
    EXPECT_LE(laplacian_apply(g, c).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(dirichlet_energy(g, c), 0.0, 1e-12);
  }
}

TEST(Laplacian, PathExampleApply) {
  using std::numbers::pi;
  const double w12 = pi * (8.0 + std::sqrt(10.0)) / 3.0;
  const double w23 = pi * (8.0 - std::sqrt(10.0)) / 3.0;
  const std::vector<Edge> edges = {{0, 1, w12, {}}, {1, 2, w23, {}}};
  const MeasuredGraph g({2 * pi, 4 * pi, 2 * pi}, edges);
  const Eigen::VectorXd out = laplacian_apply(g, Eigen::Vector3d(1.0, 0.0, 0.0));
  EXPECT_NEAR(out[0], w12 / (2 * pi), 1e-14);
  EXPECT_NEAR(out[1], -w12 / (4 * pi), 1e-14);
  EXPECT_NEAR(out[2], 0.0, 1e-14);
}

TEST(Laplacian, TwoVertexEnergy) {
  const MeasuredGraph g = two_vertices(2.5);
  EXPECT_DOUBLE_EQ(dirichlet_energy(g, Eigen::Vector2d(3.0, 1.0)), 2.5 * 4.0);
}

TEST(Laplacian, LengthMismatchIsReported) {
  const MeasuredGraph g = two_vertices(1.0);
  EXPECT_ERROR_CODE(laplacian_apply(g, Eigen::Vector3d::Zero()), ErrorCode::kDimensionMismatch);
  EXPECT_ERROR_CODE(dirichlet_energy(g, Eigen::Vector3d::Zero()), ErrorCode::kDimensionMismatch);
}

// Explicit double sum over ordered pairs: 1/2 sum_i sum_j w_ij (f_i - f_j)^2.
TEST(Laplacian, QuadraticFormConsistency) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 17);
    const MeasuredGraph g = random_connected_graph(rng, n, n);
    Eigen::VectorXd f(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = normal(rng);
    double pair_sum = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        const double d = f[static_cast<Eigen::Index>(i)] - f[static_cast<Eigen::Index>(j)];
        pair_sum += 0.5 * g.weight(i, j) * d * d;
      }
    }
    const double energy = dirichlet_energy(g, f);
    const double inner = measure_inner(g, f, laplacian_apply(g, f));
    EXPECT_NEAR(energy, pair_sum, 1e-12 * std::max(1.0, pair_sum));
    EXPECT_NEAR(energy, inner, 1e-12 * std::max(1.0, energy));
  }
}

TEST(DenseSpectrum, CompleteGraphK3) {
  const EigenResult r = spectrum_dense(complete_unit(3), true);
  ASSERT_EQ(r.eigenvalues.size(), 3);
  EXPECT_NEAR(r.eigenvalues[0], 0.0, 1e-12);
  EXPECT_NEAR(r.eigenvalues[1], 3.0, 1e-12);
  EXPECT_NEAR(r.eigenvalues[2], 3.0, 1e-12);
  EXPECT_EQ(r.method, SolverMethod::kDense);
}

TEST(DenseSpectrum, PathExample) {
  const MeasuredGraph g = load_graph(heavynet::testing::data_dir() / "p3_example.graph");
  const EigenResult r = spectrum_dense(g, false);
  EXPECT_NEAR(r.eigenvalues[0], 0.0, 1e-10);
  EXPECT_NEAR(r.eigenvalues[1], 1.0, 1e-10);
  EXPECT_NEAR(r.eigenvalues[2], 3.0, 1e-10);
}

TEST(DenseSpectrum, DisconnectedIsAnError) {
  const std::vector<Edge> edges = {{0, 1, 1.0, {}}, {2, 3, 1.0, {}}};
  EXPECT_ERROR_CODE(spectrum_dense(MeasuredGraph::with_unit_measures(4, edges), false),
                    ErrorCode::kDisconnected);
}

TEST(DenseSpectrum, ThresholdIsEnforced) {
  EXPECT_ERROR_CODE(spectrum_dense(complete_unit(6), false, 5), ErrorCode::kThresholdExceeded);
}

TEST(DenseSpectrum, KernelAndMeasureNormalizedVectors) {
  for (const auto& [name, g] : corpus()) {
    const EigenResult r = spectrum_dense(g, true);
    EXPECT_NEAR(r.eigenvalues[0], 0.0, 1e-10) << name;
    EXPECT_GT(r.eigenvalues[1], 1e-8) << name;
    const Eigen::VectorXd f0 = r.eigenvectors->col(0);
    EXPECT_LE((f0.array() - f0[0]).abs().maxCoeff(), 1e-10) << name;
    for (Eigen::Index a = 0; a < r.eigenvalues.size(); ++a) {
      for (Eigen::Index b = 0; b < r.eigenvalues.size(); ++b) {
        const double ip = measure_inner(g, r.eigenvectors->col(a), r.eigenvectors->col(b));
        EXPECT_NEAR(ip, a == b ? 1.0 : 0.0, 1e-10) << name;
      }
    }
    EXPECT_LE(r.residuals.maxCoeff(), 1e-10) << name;
  }
}

TEST(DenseSpectrum, MeasureAndWeightScaling) {
  for (const auto& [name, g] : corpus()) {
    const Eigen::VectorXd base = spectrum_dense(g, false).eigenvalues;
    const Eigen::VectorXd by_measure = spectrum_dense(g.with_scaled_measures(3.0), false).eigenvalues;
    const Eigen::VectorXd by_weight = spectrum_dense(g.with_scaled_weights(0.25), false).eigenvalues;
    const double scale = base.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 1; k < base.size(); ++k) {
      EXPECT_NEAR(by_measure[k], base[k] / 3.0, 1e-12 * scale) << name;
      EXPECT_NEAR(by_weight[k], base[k] * 0.25, 1e-12 * scale) << name;
    }
  }
}

TEST(IterativeSpectrum, AgreesWithDenseOnCorpus) {
  const double tol = 1e-9;
  for (const auto& [name, g] : corpus()) {
    const std::size_t k = std::min<std::size_t>(4, g.vertex_count() - 1);
    const EigenResult dense = spectrum_dense(g, false);
    const EigenResult it = spectrum_smallest_k(g, k, tol, 3);
    EXPECT_EQ(it.method, SolverMethod::kIterative);
    for (std::size_t i = 0; i < k; ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      EXPECT_NEAR(it.eigenvalues[e], dense.eigenvalues[e], tol) << name << " k=" << i;
      EXPECT_LE(it.residuals[e], tol) << name;
    }
  }
}

TEST(IterativeSpectrum, AgreesWithDenseOnRandomGraphs) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const MeasuredGraph g = random_connected_graph(rng, 40 + 10 * static_cast<std::size_t>(trial), 60);
    const EigenResult dense = spectrum_dense(g, false);
    const EigenResult it = spectrum_smallest_k(g, 6, 1e-9, static_cast<std::uint64_t>(trial));
    for (Eigen::Index i = 0; i < 6; ++i) EXPECT_NEAR(it.eigenvalues[i], dense.eigenvalues[i], 1e-9);
  }
}

TEST(IterativeSpectrum, SinglePairIsTheKernel) {
  const MeasuredGraph g = load_graph(heavynet::testing::data_dir() / "petersen.graph");
  const EigenResult r = spectrum_smallest_k(g, 1, 1e-10, 0);
  ASSERT_EQ(r.eigenvalues.size(), 1);
  EXPECT_EQ(r.eigenvalues[0], 0.0);
  const Eigen::VectorXd f = r.eigenvectors->col(0);
  EXPECT_LE((f.array() - f[0]).abs().maxCoeff(), 1e-12);
}

TEST(IterativeSpectrum, IsDeterministicForAFixedSeed) {
  std::mt19937_64 rng(9);
  const MeasuredGraph g = random_connected_graph(rng, 60, 80);
  const EigenResult a = spectrum_smallest_k(g, 5, 1e-9, 42);
  const EigenResult b = spectrum_smallest_k(g, 5, 1e-9, 42);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
}

TEST(IterativeSpectrum, RejectsBadK) {
  const MeasuredGraph g = complete_unit(4);
  EXPECT_ERROR_CODE(spectrum_smallest_k(g, 0, 1e-9, 0), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(spectrum_smallest_k(g, 5, 1e-9, 0), ErrorCode::kInvalidArgument);
}

TEST(IterativeSpectrum, AutoPicksByThreshold) {
  const MeasuredGraph g = load_graph(heavynet::testing::data_dir() / "grid_3x4.graph");
  IterativeOptions o;
  EXPECT_EQ(spectrum_smallest_auto(g, 3, o, 100).method, SolverMethod::kDense);
  EXPECT_EQ(spectrum_smallest_auto(g, 3, o, 5).method, SolverMethod::kIterative);
  EXPECT_EQ(spectrum_smallest_auto(g, 3, o, 100).eigenvalues.size(), 3);
}
