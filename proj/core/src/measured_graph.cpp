#include "heavynet/measured_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "heavynet/errors.hpp"

namespace heavynet {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

MeasuredGraph::MeasuredGraph(std::vector<double> measures, std::span<const Edge> edges)
    : measures_(std::move(measures)) {
  const std::size_t n = measures_.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "graph needs at least one vertex");
  for (std::size_t i = 0; i < n; ++i) {
    if (!positive_finite(measures_[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "measure of vertex " + std::to_string(i) + " is not positive");
    }
  }

  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
    if (!positive_finite(e.weight)) {
      throw Error(ErrorCode::kInvalidArgument, "edge weight is not positive");
    }
    if (e.u == e.v) continue;  // zero energy
    Edge c = e;
    if (c.u > c.v) std::swap(c.u, c.v);
    canon.push_back(c);
  }
  std::stable_sort(canon.begin(), canon.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (const Edge& e : canon) {
    if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
      edges_.back().weight += e.weight;
      if (!edges_.back().color) edges_.back().color = e.color;
    } else {
      edges_.push_back(e);
    }
  }
  build_adjacency();
}

MeasuredGraph MeasuredGraph::with_unit_measures(std::size_t n, std::span<const Edge> edges) {
  return MeasuredGraph(std::vector<double>(n, 1.0), edges);
}

void MeasuredGraph::build_adjacency() {
  const std::size_t n = measures_.size();
  row_ptr_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++row_ptr_[e.u + 1];
    ++row_ptr_[e.v + 1];
  }
  std::partial_sum(row_ptr_.begin(), row_ptr_.end(), row_ptr_.begin());
  col_idx_.resize(row_ptr_[n]);
  adj_w_.resize(row_ptr_[n]);
  degree_.assign(n, 0.0);
  std::vector<std::size_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
  for (const Edge& e : edges_) {
    col_idx_[fill[e.u]] = e.v;
    adj_w_[fill[e.u]++] = e.weight;
    col_idx_[fill[e.v]] = e.u;
    adj_w_[fill[e.v]++] = e.weight;
    degree_[e.u] += e.weight;
    degree_[e.v] += e.weight;
  }
}

double MeasuredGraph::weight(NodeId u, NodeId v) const {
  if (u >= vertex_count() || v >= vertex_count() || u == v) return 0.0;
  for (std::size_t k = row_ptr_[u]; k < row_ptr_[u + 1]; ++k) {
    if (col_idx_[k] == v) return adj_w_[k];
  }
  return 0.0;
}

std::size_t MeasuredGraph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < vertex_count(); ++i) best = std::max(best, degree(i));
  return best;
}

double MeasuredGraph::total_measure() const {
  return std::accumulate(measures_.begin(), measures_.end(), 0.0);
}

std::vector<std::size_t> MeasuredGraph::component_labels() const {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  const std::size_t n = vertex_count();
  std::vector<std::size_t> label(n, kUnset);
  std::vector<NodeId> stack;
  std::size_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId x = stack.back();
      stack.pop_back();
      for (std::size_t k = row_ptr_[x]; k < row_ptr_[x + 1]; ++k) {
        const NodeId y = col_idx_[k];
        if (label[y] == kUnset) {
          label[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return label;
}

std::size_t MeasuredGraph::component_count() const {
  const auto labels = component_labels();
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

MeasuredGraph MeasuredGraph::with_scaled_measures(double factor) const {
  std::vector<double> m = measures_;
  for (double& x : m) x *= factor;
  return MeasuredGraph(std::move(m), edges_);
}

MeasuredGraph MeasuredGraph::with_scaled_weights(double factor) const {
  std::vector<Edge> e = edges_;
  for (Edge& x : e) x.weight *= factor;
  return MeasuredGraph(measures_, e);
}

MeasuredGraph MeasuredGraph::with_weights(std::span<const double> weights) const {
  if (weights.size() != edges_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "weight vector does not match edge count");
  }
  std::vector<Edge> e = edges_;
  for (std::size_t i = 0; i < e.size(); ++i) e[i].weight = weights[i];
  return MeasuredGraph(measures_, e);
}

MeasuredGraph MeasuredGraph::induced(std::span<const NodeId> nodes) const {
  std::unordered_map<NodeId, NodeId> local;
  local.reserve(nodes.size());
  std::vector<double> m;
  m.reserve(nodes.size());
  for (NodeId x : nodes) {
    if (x >= vertex_count()) throw Error(ErrorCode::kInvalidArgument, "node out of range");
    local.emplace(x, m.size());
    m.push_back(measures_[x]);
  }
  std::vector<Edge> e;
  for (const Edge& edge : edges_) {
    auto iu = local.find(edge.u);
    auto iv = local.find(edge.v);
    if (iu != local.end() && iv != local.end()) {
      e.push_back({iu->second, iv->second, edge.weight, edge.color});
    }
  }
  return MeasuredGraph(std::move(m), e);
}

}  // namespace heavynet
