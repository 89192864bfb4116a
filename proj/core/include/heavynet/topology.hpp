#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "heavynet/measured_graph.hpp"

namespace heavynet {

// D = (N-1)/2 directed Hamiltonian cycles on vertices 0..N-1 that together
// use every edge of K_N exactly once. Color i is the index of the cycle.
struct ColorAssignment {
  std::size_t N = 0;
  std::vector<std::vector<NodeId>> cycles;  // cycles[i] lists N vertices; closes back to front
  std::vector<bool> reversed;               // orientation chosen for each cycle

  std::size_t colors() const { return cycles.size(); }
  // Color of the unordered pair, -1 if the pair is not an edge.
  int color_of(NodeId u, NodeId v) const;
  // Successor of v along cycle `color`.
  NodeId next(std::size_t color, NodeId v) const;

  // Throws kInvalidArgument on the first violated decomposition property.
  void verify() const;
};

// Classical zigzag starter path on Z_{N-1} closed through a fixed hub vertex,
// rotated D times. Each cycle's orientation is a seeded coin flip.
ColorAssignment walecki_decomposition(std::size_t N, std::uint64_t orientation_seed);

// D lines, each the space-separated vertex sequence of one directed cycle.
std::string write_color_assignment(const ColorAssignment& ca);
ColorAssignment read_color_assignment(std::string_view text);

// 1 + N(N-3)/2, the genus of the surface whose pants pieces are N spheres with
// N-1 holes joined pairwise by collars.
std::size_t genus_complete_construction(std::size_t N);

// Dual-graph description of a surface cut along pinching curves.
struct SurfaceModel {
  MeasuredGraph dual_graph;              // measures = piece areas, weights = w_e
  std::vector<std::size_t> vertex_genera;

  void validate() const;
};

// gamma = 1 - (sum_v chi(X_v)) / 2 with chi(X_v) = 2 - 2 g_v - deg(v); the
// annular collars contribute nothing. Throws kInvalidArgument if the sum is
// odd or the genus would be negative.
std::size_t euler_genus_of_dual(const SurfaceModel& s);
long euler_characteristic(const SurfaceModel& s);

// JSON: {"areas": [..], "genera": [..], "edges": [[u, v, w], ..]}
SurfaceModel read_surface_model(std::string_view json_text);
std::string write_surface_model(const SurfaceModel& s);

}  // namespace heavynet
