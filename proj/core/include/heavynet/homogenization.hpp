#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heavynet/expander.hpp"
#include "heavynet/inverse_spectral.hpp"
#include "heavynet/measured_graph.hpp"
#include "heavynet/topology.hpp"

namespace heavynet {

// Attachment points of one color: a block copy is entered at in_node and left
// at out_node, and every crossing between copies has the given conductance.
struct BlockPort {
  NodeId in_node = 0;
  NodeId out_node = 0;
  double conductance = 1.0;
};

struct BlockModel {
  std::vector<double> measures;  // sums to the block volume V_F
  std::vector<Edge> internal_edges;
  std::vector<BlockPort> ports;  // one per color

  std::size_t node_count() const { return measures.size(); }
  std::size_t colors() const { return ports.size(); }
  double volume() const;
  // Throws kInvalidArgument: empty, non-positive data, bad port nodes, or a
  // disconnected internal graph.
  void validate() const;

  // One node of measure V_F; every port sits on it.
  static BlockModel single_node(std::size_t D, double volume = 1.0, double conductance = 1.0);
  // Four nodes on a weighted diamond with distinct ports per color.
  static BlockModel diamond(std::size_t D, double volume = 1.0);
};

struct CellSolution {
  std::size_t color = 0;
  Eigen::VectorXd chi;  // chi(in_node) = 0; the next period's in_node sits at 1
  double C = 0.0;       // minimal energy per period
  double flux = 0.0;    // current through the shifted port edge
};

// One period of the color-i chain: internal edges, the other colors' port
// edges closed onto the same copy, and the color-i port edge from out_node to
// the next copy's in_node, whose potential is chi(in_node) + 1.
// Throws kSingularSystem when part of the period floats.
CellSolution effective_conductance(const BlockModel& b, std::size_t color);

// K copies chained through color-i port edges, with terminal potentials a and
// b_val attached by port edges at both ends (K + 1 crossings).
struct CorridorSolution {
  double energy = 0.0;
  Eigen::VectorXd potentials;  // K * node_count values, copy-major
};
CorridorSolution corridor_min_energy(const BlockModel& b, std::size_t color, std::size_t K,
                                     double a, double b_val);

// The chain for the lower-bound law: K copies plus one terminal node, each copy
// leaving through its color-i port edge (the last one into the terminal).
struct CorridorChain {
  MeasuredGraph graph;
  NodeId entry = 0;     // color-i in_node of the first copy
  NodeId terminal = 0;  // stands for the in_node of copy K
  // Cell potential continued periodically: chi + k on copy k, K at the terminal.
  Eigen::VectorXd harmonic;
};
CorridorChain corridor_chain(const BlockModel& b, std::size_t color, std::size_t K);

// floor(m C / w_star); throws kScaleTooSmall when that is 0.
std::size_t corridor_length(std::size_t m, double C_color, double w_star);

// A macroscopic edge traversed along its color cycle, u -> v.
struct MacroEdge {
  NodeId u = 0;
  NodeId v = 0;
  std::size_t color = 0;
  double w_star = 0.0;
  std::size_t K = 0;
};

inline constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

struct MacroNetwork {
  MeasuredGraph graph;
  std::size_t m = 0;
  std::size_t N = 0;
  std::size_t block_nodes = 0;
  double block_volume = 0.0;
  std::vector<std::size_t> cluster_of;         // kUnassigned on corridor nodes
  std::vector<std::size_t> corridor_of;        // kUnassigned on cluster nodes
  std::vector<std::size_t> corridor_position;  // copy index along the corridor
  std::vector<MacroEdge> edges;
  std::vector<std::size_t> corridor_lengths;  // same order as edges
  ColorAssignment color_assignment;
  std::vector<ClusterWiring> wirings;  // one per macroscopic vertex
  std::uint64_t seed = 0;

  std::vector<NodeId> cluster_nodes(NodeId v) const;
  bool is_corridor_node(NodeId x) const { return corridor_of[x] != kUnassigned; }
};

struct AssemblyOptions {
  WiringOptions wiring;
};

// Clusters of m^3 expander-wired copies, one per vertex of K_N, joined by one
// corridor per edge. N must be odd and at least 5.
MacroNetwork assemble_network(const SpectralTarget& t, const WeightSolution& ws,
                              const BlockModel& b, const ColorAssignment& ca, std::size_t m,
                              std::uint64_t seed, const AssemblyOptions& options = {});

struct MacroModel {
  MeasuredGraph graph;                     // measures m^3 V_F, weights C_c / K_e
  std::vector<std::size_t> corridor_lengths;  // graph.edges() order
};

MacroModel macro_laplacian(const WeightSolution& ws, const ColorAssignment& ca,
                           const std::vector<double>& cell_conductances, std::size_t m,
                           double block_volume);

// Node labels and corridor data as JSON; the graph itself goes out separately.
std::string write_network_bookkeeping(const MacroNetwork& net);

// Seeds for independent sub-tasks derived from one user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace heavynet
