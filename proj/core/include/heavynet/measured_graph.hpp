#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace heavynet {

using NodeId = std::size_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;
  std::optional<int> color;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Graph with positive vertex measures and positive symmetric edge weights.
//
// Stored edges are canonical: u < v, sorted lexicographically, one record per
// unordered pair. Immutable once built, so instances can be shared freely
// between threads.
class MeasuredGraph {
 public:
  MeasuredGraph() = default;

  // Builds a graph from raw input. Self-loops are dropped and parallel edges
  // are merged by summing their weights (the first color seen is kept).
  // Throws Error(kInvalidArgument) on non-positive measures or weights and on
  // out-of-range endpoints.
  MeasuredGraph(std::vector<double> measures, std::span<const Edge> edges);

  // Unit measures.
  static MeasuredGraph with_unit_measures(std::size_t n, std::span<const Edge> edges);

  std::size_t vertex_count() const { return measures_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const double> measures() const { return measures_; }
  std::span<const Edge> edges() const { return edges_; }

  // Weight of the unordered pair, or 0 if absent.
  double weight(NodeId u, NodeId v) const;

  // Weighted degree sum_j w_ij.
  double weighted_degree(NodeId i) const { return degree_[i]; }
  std::size_t degree(NodeId i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  std::size_t max_degree() const;
  double total_measure() const;

  // CSR adjacency (both directions stored).
  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const NodeId> col_idx() const { return col_idx_; }
  std::span<const double> adj_weights() const { return adj_w_; }

  // Component label per vertex, labels 0..count-1 in order of first vertex.
  std::vector<std::size_t> component_labels() const;
  std::size_t component_count() const;
  bool connected() const { return component_count() <= 1; }

  MeasuredGraph with_scaled_measures(double factor) const;
  MeasuredGraph with_scaled_weights(double factor) const;
  // Same topology, replacement weights in edges() order.
  MeasuredGraph with_weights(std::span<const double> weights) const;

  // Subgraph induced on `nodes` (renumbered in the given order).
  MeasuredGraph induced(std::span<const NodeId> nodes) const;

  friend bool operator==(const MeasuredGraph& a, const MeasuredGraph& b) {
    return a.measures_ == b.measures_ && a.edges_ == b.edges_;
  }

 private:
  void build_adjacency();

  std::vector<double> measures_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> row_ptr_;
  std::vector<NodeId> col_idx_;
  std::vector<double> adj_w_;
  std::vector<double> degree_;
};

}  // namespace heavynet
