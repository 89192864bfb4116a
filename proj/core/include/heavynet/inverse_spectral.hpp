#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "heavynet/eigensolvers.hpp"
#include "heavynet/measured_graph.hpp"

namespace heavynet {

// A strictly increasing list of positive targets (the leading 0 is implicit),
// the approximation tolerance, the size of the carrier complete graph and the
// padding values that fill the rest of its spectrum.
struct SpectralTarget {
  std::vector<double> targets;
  double epsilon = 0.5;
  std::size_t N = 0;
  // Explicit padding values in the same units as the padded output
  // (already multiplied by the block volume). Empty selects the default ramp.
  std::vector<double> padding;

  std::size_t n() const { return targets.size(); }

  // Throws kInvalidArgument describing the first violated constraint.
  void validate() const;
  // Like validate(), additionally requiring odd N >= max(n+1, 5).
  void validate_for_assembly() const;
};

// epsilon >= 1 is clamped to 0.5; N defaults to max(n+1, 4) when zero.
SpectralTarget make_target(std::vector<double> targets, double epsilon = 0.5,
                           std::size_t N = 0);

// mu_k = lambda_k * V_F for k <= n, then padding strictly above
// (lambda_n + 1) V_F. The default ramp starts at (lambda_n + 2) V_F, step V_F.
std::vector<double> pad_targets(const SpectralTarget& t, double block_volume);

struct WeightSolution {
  std::size_t N = 0;
  double vertex_measure = 1.0;
  // One entry per unordered pair u < v, lexicographic.
  std::vector<Edge> weights;
  std::vector<double> achieved_spectrum;  // nonzero eigenvalues, ascending
  double mismatch = 0.0;
  std::size_t restarts_used = 0;

  double weight(NodeId u, NodeId v) const;
  MeasuredGraph graph() const;
};

struct PrescribeOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::size_t restarts = 32;
  std::size_t iterations = 500;
  double positivity_floor = 1e-12;
  // Standard deviation of the log-normal spread around the starting point.
  double init_spread = 0.5;
  // Relative eigenvalue gap below which iterates are perturbed.
  double degeneracy_gap = 1e-7;
};

// Result of fitting the weights of a fixed topology.
struct TopologyFit {
  std::vector<double> weights;  // in topology.edges() order
  std::vector<double> achieved;
  double mismatch = 0.0;
  std::size_t restarts_used = 0;
};

// Levenberg-Marquardt on log-weights, driving the nonzero spectrum of the
// given measured topology onto mu (ascending, length vertex_count - 1).
// Multi-start; the lowest restart index meeting tol wins.
// Throws kNonConvergence (best mismatch in the message) or kBoundaryFailure.
TopologyFit fit_weights_on_topology(const MeasuredGraph& topology, std::span<const double> mu,
                                    const PrescribeOptions& options);

// Positive weights on all pairs of K_N whose Laplacian with constant vertex
// measure has nonzero spectrum mu.
WeightSolution prescribe_complete_graph(std::size_t N, double vertex_measure,
                                        std::span<const double> mu,
                                        const PrescribeOptions& options);
WeightSolution prescribe_complete_graph(std::size_t N, double vertex_measure,
                                        std::span<const double> mu, double tol,
                                        std::uint64_t seed);

inline constexpr std::array<double, 3> kP3Measures = {2.0 * std::numbers::pi,
                                                      4.0 * std::numbers::pi,
                                                      2.0 * std::numbers::pi};

struct P3Weights {
  double w12 = 0.0;
  double w23 = 0.0;
};

// Path v1 - v2 - v3 with areas (2pi, 4pi, 2pi): the trace and the sum of
// principal 2x2 minors fix w12 + w23 and w12 * w23. Real roots exist iff
// lambda2 >= 2 lambda1; otherwise throws kInfeasible. Returns w12 >= w23.
P3Weights solve_p3_closed_form(double lambda1, double lambda2);
MeasuredGraph p3_graph(double w12, double w23);

// d lambda_k / d w_e = (f_k(u) - f_k(v))^2 for measure-normalized f_k.
// Rows follow eig.eigenvalues, columns follow g.edges(). Throws
// kNearDegenerate when two eigenvalues are closer than
// gap_threshold * max(1, |lambda_max|), kInvalidArgument without vectors.
Eigen::MatrixXd spectral_jacobian(const MeasuredGraph& g, const EigenResult& eig,
                                  double gap_threshold = 1e-9);

}  // namespace heavynet
