#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "heavynet/measured_graph.hpp"

namespace heavynet {

// The internal edge s -> sigma_color(s) removed to free one outgoing face
// (at out_node = s) and one incoming face (at in_node = sigma_color(s)).
struct PortEdge {
  std::size_t color = 0;
  NodeId out_node = 0;
  NodeId in_node = 0;
};

struct GapCertificate {
  double adjacency_lambda2 = 0.0;  // second largest adjacency eigenvalue before deletion
  double friedman_bound = 0.0;     // 2 sqrt(2D - 1)
  double slack = 0.0;
  double lambda1_before = 0.0;     // combinatorial Laplacian gap before deletion
  double lambda1_after = 0.0;      // ... and after port deletion (0 until ports exist)
  // Spectral Cheeger lower bounds lambda1 / 2.
  double cheeger_lower_before() const { return 0.5 * lambda1_before; }
  double cheeger_lower_after() const { return 0.5 * lambda1_after; }
  bool gap_ok() const { return adjacency_lambda2 <= friedman_bound + slack; }
};

// D color classes on `size` nodes, each a permutation; their union is a simple
// connected 2D-regular graph.
struct ClusterWiring {
  std::size_t size = 0;
  std::size_t D = 0;
  std::vector<std::vector<NodeId>> permutations;  // permutations[i][t] = sigma_i(t)
  std::vector<PortEdge> ports;                    // empty until expose_ports
  GapCertificate gap;
  std::size_t resamples = 0;  // rejected full wirings before acceptance
  std::uint64_t seed = 0;

  bool has_ports() const { return !ports.empty(); }
  bool is_port_edge(std::size_t color, NodeId t) const;
  // Unit weights and unit measures; port edges omitted when present.
  MeasuredGraph graph(bool drop_ports = true) const;
};

struct WiringOptions {
  double gap_slack = 0.5;
  std::size_t resample_budget = 100;
  // Draws allowed per color class while rejecting fixed points, 2-cycles and
  // collisions with earlier classes.
  std::size_t permutation_draws = 200000;
  // Gap checks need one eigenvalue; above this size they go iterative, which is
  // far cheaper than a dense tridiagonalization.
  std::size_t dense_threshold = 512;
  double eigen_tol = 1e-9;
};

// Throws kInvalidArgument unless size > 4D and D >= 2, kResampleBudget when no
// candidate passes (message lists the best candidate's shortfalls).
ClusterWiring sample_wiring(std::size_t size, std::size_t D, std::uint64_t seed,
                            const WiringOptions& options);
ClusterWiring sample_wiring(std::size_t size, std::size_t D, std::uint64_t seed,
                            double gap_slack = 0.5);

// Greedy choice of one port edge per color over seed-shuffled candidates, the
// D edges pairwise vertex-disjoint; connectivity after deletion is checked.
ClusterWiring expose_ports(const ClusterWiring& w, std::uint64_t seed,
                           const WiringOptions& options = {});

// min over 1 <= |S| <= n/2 of |boundary(S)| / |S| with unit edge weights,
// by exhaustive enumeration. Throws kSizeTooLarge above 20 vertices.
double cheeger_exact(const MeasuredGraph& g);

struct CheegerBounds {
  double lower = 0.0;
  double upper = 0.0;
  double lambda1 = 0.0;  // combinatorial (unit weight, unit measure) Laplacian
  std::size_t max_degree = 0;
};

// lambda1 / 2 <= h <= sqrt(lambda1 (2 d_max - lambda1)); the upper bound falls
// back to the minimum degree for K2 and K3, where that inequality fails.
CheegerBounds cheeger_bounds(const MeasuredGraph& g);

std::string write_wiring_json(const ClusterWiring& w);
ClusterWiring read_wiring_json(std::string_view text);

}  // namespace heavynet
