#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "heavynet/measured_graph.hpp"

namespace heavynet {

enum class SolverMethod { kDense, kIterative };

std::string_view to_string(SolverMethod m);

// Eigenpairs of the generalized problem K f = lambda M f (edge quadratic form
// against the measure inner product). Eigenvalues ascending with multiplicity;
// eigenvector columns are measure-orthonormal.
struct EigenResult {
  Eigen::VectorXd eigenvalues;
  std::optional<Eigen::MatrixXd> eigenvectors;
  // ||K f - lambda M f|| in the M^{-1} norm, i.e. ||S y - lambda y|| for the
  // symmetrized operator S = M^{-1/2} K M^{-1/2} and y = M^{1/2} f.
  Eigen::VectorXd residuals;
  SolverMethod method = SolverMethod::kDense;
};

inline constexpr std::size_t kDefaultDenseThreshold = 2000;

// Gershgorin upper bound on the spectrum of L; used to make residuals relative.
double spectral_scale(const MeasuredGraph& g);

// Residual of a single pair, in the norm described on EigenResult.
double pair_residual(const MeasuredGraph& g, double lambda,
                     const Eigen::Ref<const Eigen::VectorXd>& f);

// Full spectrum. Throws kDisconnected (with the component count) or
// kThresholdExceeded.
EigenResult spectrum_dense(const MeasuredGraph& g, bool with_vectors,
                           std::size_t threshold = kDefaultDenseThreshold);

struct IterativeOptions {
  // Absolute residual bound per pair; by Weyl's inequality each returned
  // eigenvalue is then within tol of a true one.
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::size_t max_basis = 800;
  std::size_t max_cg_iterations = 100000;
  double cg_rel_tol = 1e-13;
};

// k smallest eigenpairs by shift-free inverse Lanczos: the constant kernel is
// deflated exactly, the inverse on its complement is applied by
// Jacobi-preconditioned CG, and a fully reorthogonalized Lanczos recurrence
// runs on that inverse. Deterministic for a fixed seed.
// Throws kDisconnected, kInvalidArgument (k out of range) or kNonConvergence
// (message lists the achieved residuals).
EigenResult spectrum_smallest_k(const MeasuredGraph& g, std::size_t k,
                                const IterativeOptions& options);
EigenResult spectrum_smallest_k(const MeasuredGraph& g, std::size_t k, double tol,
                                std::uint64_t seed = 0);

// Dense when the graph is at most `threshold` vertices, otherwise iterative;
// returns the k smallest pairs either way.
EigenResult spectrum_smallest_auto(const MeasuredGraph& g, std::size_t k,
                                   const IterativeOptions& options,
                                   std::size_t threshold = kDefaultDenseThreshold);

// Modified Gram-Schmidt in the measure inner product, in place, twice.
void measure_orthonormalize(const MeasuredGraph& g, Eigen::MatrixXd& vectors);

}  // namespace heavynet
