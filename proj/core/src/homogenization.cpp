#include "heavynet/homogenization.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <json.hpp>

#include "heavynet/errors.hpp"

namespace heavynet {

namespace {

struct Link {
  NodeId a;
  NodeId b;
  double w;
};

struct ClampedSolution {
  Eigen::VectorXd potentials;
  double energy = 0.0;
};

// Minimizes sum_links w (u_a - u_b)^2 with some nodes held at fixed values.
ClampedSolution solve_clamped(std::size_t n, const std::vector<Link>& links,
                              const std::vector<std::pair<NodeId, double>>& fixed) {
  std::vector<double> value(n, 0.0);
  std::vector<bool> is_fixed(n, false);
  for (const auto& [x, val] : fixed) {
    is_fixed[x] = true;
    value[x] = val;
  }
  // every free node must reach a fixed one
  std::vector<std::vector<NodeId>> adj(n);
  for (const Link& l : links) {
    adj[l.a].push_back(l.b);
    adj[l.b].push_back(l.a);
  }
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack;
  for (const auto& f : fixed) {
    if (!seen[f.first]) {
      seen[f.first] = true;
      stack.push_back(f.first);
    }
  }
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    for (NodeId y : adj[x]) {
      if (!seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!seen[x]) {
      throw Error(ErrorCode::kSingularSystem,
                  "node " + std::to_string(x) + " is not tied to any clamped potential");
    }
  }

  std::vector<std::size_t> slot(n, kUnassigned);
  std::size_t free_count = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (!is_fixed[x]) slot[x] = free_count++;
  }
  ClampedSolution out;
  out.potentials = Eigen::Map<Eigen::VectorXd>(value.data(), static_cast<Eigen::Index>(n));
  if (free_count > 0) {
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(free_count));
    auto add = [&](NodeId p, NodeId q, double w) {
      if (is_fixed[p]) return;
      const auto i = static_cast<Eigen::Index>(slot[p]);
      trip.emplace_back(i, i, w);
      if (is_fixed[q]) {
        rhs[i] += w * value[q];
      } else {
        trip.emplace_back(i, static_cast<Eigen::Index>(slot[q]), -w);
      }
    };
    for (const Link& l : links) {
      add(l.a, l.b, l.w);
      add(l.b, l.a, l.w);
    }
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(free_count),
                                  static_cast<Eigen::Index>(free_count));
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success) {
      throw Error(ErrorCode::kSingularSystem, "factorization failed");
    }
    const Eigen::VectorXd sol = ldlt.solve(rhs);
    for (std::size_t x = 0; x < n; ++x) {
      if (!is_fixed[x]) out.potentials[static_cast<Eigen::Index>(x)] = sol[static_cast<Eigen::Index>(slot[x])];
    }
  }
  for (const Link& l : links) {
    const double d = out.potentials[static_cast<Eigen::Index>(l.a)] -
                     out.potentials[static_cast<Eigen::Index>(l.b)];
    out.energy += l.w * d * d;
  }
  return out;
}

// Internal edges plus closed port edges of every color except `open`, for a
// copy whose nodes start at `base`.
void append_copy(const BlockModel& b, std::size_t open, NodeId base, std::vector<Link>& links) {
  for (const Edge& e : b.internal_edges) links.push_back({base + e.u, base + e.v, e.weight});
  for (std::size_t j = 0; j < b.colors(); ++j) {
    if (j == open) continue;
    const BlockPort& p = b.ports[j];
    if (p.in_node != p.out_node) links.push_back({base + p.out_node, base + p.in_node, p.conductance});
  }
}

void check_color(const BlockModel& b, std::size_t color) {
  b.validate();
  if (color >= b.colors()) {
    throw Error(ErrorCode::kInvalidArgument, "color " + std::to_string(color) +
                                                 " out of range for a block with " +
                                                 std::to_string(b.colors()) + " ports");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double BlockModel::volume() const { return std::accumulate(measures.begin(), measures.end(), 0.0); }

void BlockModel::validate() const {
  if (measures.empty()) throw Error(ErrorCode::kInvalidArgument, "block has no nodes");
  if (ports.empty()) throw Error(ErrorCode::kInvalidArgument, "block has no ports");
  for (double x : measures) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument, "block measures must be positive");
    }
  }
  for (const BlockPort& p : ports) {
    if (p.in_node >= node_count() || p.out_node >= node_count()) {
      throw Error(ErrorCode::kInvalidArgument, "port node out of range");
    }
    if (!(p.conductance > 0.0) || !std::isfinite(p.conductance)) {
      throw Error(ErrorCode::kInvalidArgument, "port conductance must be positive");
    }
  }
  const MeasuredGraph g(measures, internal_edges);
  if (!g.connected()) throw Error(ErrorCode::kInvalidArgument, "block graph is disconnected");
}

BlockModel BlockModel::single_node(std::size_t D, double volume, double conductance) {
  BlockModel b;
  b.measures = {volume};
  b.ports.assign(D, BlockPort{0, 0, conductance});
  return b;
}

BlockModel BlockModel::diamond(std::size_t D, double volume) {
  BlockModel b;
  b.measures.assign(4, volume / 4.0);
  b.internal_edges = {{0, 1, 1.0, {}}, {0, 2, 2.0, {}}, {1, 3, 1.5, {}}, {2, 3, 0.5, {}},
                      {1, 2, 1.0, {}}};
  const BlockPort cycle[4] = {{0, 3, 1.0}, {1, 2, 2.0}, {2, 1, 0.5}, {3, 0, 1.5}};
  for (std::size_t i = 0; i < D; ++i) b.ports.push_back(cycle[i % 4]);
  return b;
}

CellSolution effective_conductance(const BlockModel& b, std::size_t color) {
  check_color(b, color);
  const std::size_t nb = b.node_count();
  const BlockPort& p = b.ports[color];
  std::vector<Link> links;
  append_copy(b, color, 0, links);
  const NodeId next_in = nb;
  links.push_back({p.out_node, next_in, p.conductance});
  const ClampedSolution s = solve_clamped(nb + 1, links, {{p.in_node, 0.0}, {next_in, 1.0}});
  CellSolution c;
  c.color = color;
  c.chi = s.potentials.head(static_cast<Eigen::Index>(nb));
  c.C = s.energy;
  c.flux = p.conductance * (1.0 - c.chi[static_cast<Eigen::Index>(p.out_node)]);
  if (!(c.C > 0.0)) throw Error(ErrorCode::kSingularSystem, "cell energy is not positive");
  return c;
}

CorridorSolution corridor_min_energy(const BlockModel& b, std::size_t color, std::size_t K,
                                     double a, double b_val) {
  check_color(b, color);
  if (K == 0) throw Error(ErrorCode::kInvalidArgument, "corridor needs K >= 1");
  const std::size_t nb = b.node_count();
  const BlockPort& p = b.ports[color];
  const NodeId ta = K * nb;
  const NodeId tb = K * nb + 1;
  std::vector<Link> links;
  for (std::size_t k = 0; k < K; ++k) append_copy(b, color, k * nb, links);
  links.push_back({ta, p.in_node, p.conductance});
  for (std::size_t k = 0; k + 1 < K; ++k) {
    links.push_back({k * nb + p.out_node, (k + 1) * nb + p.in_node, p.conductance});
  }
  links.push_back({(K - 1) * nb + p.out_node, tb, p.conductance});
  const ClampedSolution s = solve_clamped(K * nb + 2, links, {{ta, a}, {tb, b_val}});
  CorridorSolution out;
  out.energy = s.energy;
  out.potentials = s.potentials.head(static_cast<Eigen::Index>(K * nb));
  return out;
}

CorridorChain corridor_chain(const BlockModel& b, std::size_t color, std::size_t K) {
  if (K == 0) throw Error(ErrorCode::kInvalidArgument, "corridor needs K >= 1");
  const CellSolution cell = effective_conductance(b, color);
  const std::size_t nb = b.node_count();
  const BlockPort& p = b.ports[color];
  std::vector<Link> links;
  for (std::size_t k = 0; k < K; ++k) append_copy(b, color, k * nb, links);
  for (std::size_t k = 0; k < K; ++k) {
    const NodeId next = k + 1 < K ? (k + 1) * nb + p.in_node : K * nb;
    links.push_back({k * nb + p.out_node, next, p.conductance});
  }
  CorridorChain c;
  c.entry = p.in_node;
  c.terminal = K * nb;
  std::vector<Edge> edges;
  edges.reserve(links.size());
  for (const Link& l : links) edges.push_back({l.a, l.b, l.w, {}});
  std::vector<double> measures;
  for (std::size_t k = 0; k < K; ++k) measures.insert(measures.end(), b.measures.begin(), b.measures.end());
  measures.push_back(1.0);
  c.graph = MeasuredGraph(std::move(measures), edges);
  c.harmonic.resize(static_cast<Eigen::Index>(K * nb + 1));
  for (std::size_t k = 0; k < K; ++k) {
    c.harmonic.segment(static_cast<Eigen::Index>(k * nb), static_cast<Eigen::Index>(nb)) =
        cell.chi.array() + static_cast<double>(k);
  }
  c.harmonic[static_cast<Eigen::Index>(K * nb)] = static_cast<double>(K);
  return c;
}

std::size_t corridor_length(std::size_t m, double C_color, double w_star) {
  if (!(C_color > 0.0) || !(w_star > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "conductance and weight must be positive");
  }
  const double q = std::floor(static_cast<double>(m) * C_color / w_star);
  if (q < 1.0) {
    throw Error(ErrorCode::kScaleTooSmall, "m = " + std::to_string(m) +
                                               " gives an empty corridor (m C / w* < 1)");
  }
  return static_cast<std::size_t>(q);
}

std::vector<NodeId> MacroNetwork::cluster_nodes(NodeId v) const {
  std::vector<NodeId> out;
  for (NodeId x = 0; x < cluster_of.size(); ++x) {
    if (cluster_of[x] == v) out.push_back(x);
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64((stream << 32) ^ index));
}

MacroNetwork assemble_network(const SpectralTarget& t, const WeightSolution& ws,
                              const BlockModel& b, const ColorAssignment& ca, std::size_t m,
                              std::uint64_t seed, const AssemblyOptions& options) {
  t.validate_for_assembly();
  b.validate();
  ca.verify();
  const std::size_t N = ca.N;
  if (ws.N != N || t.N != N) {
    throw Error(ErrorCode::kDimensionMismatch, "target, weights and colors disagree on N");
  }
  const std::size_t D = ca.colors();
  if (b.colors() < D) {
    throw Error(ErrorCode::kInvalidArgument, "block has fewer ports than colors");
  }
  std::vector<double> C(D);
  for (std::size_t i = 0; i < D; ++i) C[i] = effective_conductance(b, i).C;

  MacroNetwork net;
  net.m = m;
  net.N = N;
  net.block_nodes = b.node_count();
  net.block_volume = b.volume();
  net.color_assignment = ca;
  net.seed = seed;
  for (std::size_t i = 0; i < D; ++i) {
    for (NodeId u = 0; u < N; ++u) {
      const NodeId v = ca.next(i, u);
      const double w = ws.weight(u, v);
      net.edges.push_back({u, v, i, w, corridor_length(m, C[i], w)});
      net.corridor_lengths.push_back(net.edges.back().K);
    }
  }

  const std::size_t nb = b.node_count();
  const std::size_t copies = m * m * m;
  const std::size_t cluster_size = copies * nb;
  std::size_t total = N * cluster_size;
  for (const MacroEdge& e : net.edges) total += e.K * nb;
  net.cluster_of.assign(total, kUnassigned);
  net.corridor_of.assign(total, kUnassigned);
  net.corridor_position.assign(total, kUnassigned);

  std::vector<double> measures(total);
  std::vector<Link> links;
  std::vector<int> link_color;
  auto add_copy = [&](NodeId base) {
    for (const Edge& e : b.internal_edges) {
      links.push_back({base + e.u, base + e.v, e.weight});
      link_color.push_back(-1);
    }
    for (std::size_t x = 0; x < nb; ++x) measures[base + x] = b.measures[x];
  };
  auto seal = [&](NodeId base, std::size_t open) {
    for (std::size_t j = 0; j < b.colors(); ++j) {
      if (j == open) continue;
      const BlockPort& p = b.ports[j];
      if (p.in_node == p.out_node) continue;
      links.push_back({base + p.out_node, base + p.in_node, p.conductance});
      link_color.push_back(static_cast<int>(j));
    }
  };

  net.wirings.resize(N);
  for (NodeId v = 0; v < N; ++v) {
    const ClusterWiring sampled =
        sample_wiring(copies, D, derive_seed(seed, 1, v), options.wiring);
    net.wirings[v] = expose_ports(sampled, derive_seed(seed, 2, v), options.wiring);
    const ClusterWiring& w = net.wirings[v];
    const NodeId base = v * cluster_size;
    for (std::size_t c = 0; c < copies; ++c) {
      add_copy(base + c * nb);
      // colors beyond the wiring have no partner copy; close them in place
      for (std::size_t j = D; j < b.colors(); ++j) {
        const BlockPort& p = b.ports[j];
        if (p.in_node == p.out_node) continue;
        links.push_back({base + c * nb + p.out_node, base + c * nb + p.in_node, p.conductance});
        link_color.push_back(static_cast<int>(j));
      }
    }
    for (NodeId x = base; x < base + cluster_size; ++x) net.cluster_of[x] = v;
    for (std::size_t i = 0; i < D; ++i) {
      const BlockPort& p = b.ports[i];
      for (NodeId c = 0; c < copies; ++c) {
        if (w.is_port_edge(i, c)) continue;
        links.push_back({base + c * nb + p.out_node, base + w.permutations[i][c] * nb + p.in_node,
                         p.conductance});
        link_color.push_back(static_cast<int>(i));
      }
    }
  }

  auto port_of = [&](NodeId v, std::size_t color) -> const PortEdge& {
    for (const PortEdge& p : net.wirings[v].ports) {
      if (p.color == color) return p;
    }
    throw Error(ErrorCode::kInternal, "cluster lacks a port of some color");
  };

  NodeId base = N * cluster_size;
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const MacroEdge& me = net.edges[e];
    const BlockPort& p = b.ports[me.color];
    const NodeId from = me.u * cluster_size + port_of(me.u, me.color).out_node * nb + p.out_node;
    const NodeId to = me.v * cluster_size + port_of(me.v, me.color).in_node * nb + p.in_node;
    NodeId prev_out = from;
    for (std::size_t k = 0; k < me.K; ++k) {
      const NodeId copy = base + k * nb;
      add_copy(copy);
      seal(copy, me.color);
      links.push_back({prev_out, copy + p.in_node, p.conductance});
      link_color.push_back(static_cast<int>(me.color));
      prev_out = copy + p.out_node;
      for (std::size_t x = 0; x < nb; ++x) {
        net.corridor_of[copy + x] = e;
        net.corridor_position[copy + x] = k;
      }
    }
    links.push_back({prev_out, to, p.conductance});
    link_color.push_back(static_cast<int>(me.color));
    base += me.K * nb;
  }

  std::vector<Edge> edges;
  edges.reserve(links.size());
  for (std::size_t l = 0; l < links.size(); ++l) {
    Edge e{links[l].a, links[l].b, links[l].w, {}};
    if (link_color[l] >= 0) e.color = link_color[l];
    edges.push_back(e);
  }
  net.graph = MeasuredGraph(std::move(measures), edges);
  if (!net.graph.connected()) {
    throw Error(ErrorCode::kInternal, "assembled network is disconnected");
  }
  return net;
}

MacroModel macro_laplacian(const WeightSolution& ws, const ColorAssignment& ca,
                           const std::vector<double>& cell_conductances, std::size_t m,
                           double block_volume) {
  if (!(block_volume > 0.0)) throw Error(ErrorCode::kInvalidArgument, "V_F must be positive");
  if (ws.N != ca.N) throw Error(ErrorCode::kDimensionMismatch, "weights and colors disagree on N");
  if (cell_conductances.size() < ca.colors()) {
    throw Error(ErrorCode::kDimensionMismatch, "one conductance per color required");
  }
  MacroModel out;
  std::vector<Edge> edges;
  for (NodeId u = 0; u < ca.N; ++u) {
    for (NodeId v = u + 1; v < ca.N; ++v) {
      const int c = ca.color_of(u, v);
      if (c < 0) throw Error(ErrorCode::kInternal, "pair without a color");
      const double C = cell_conductances[static_cast<std::size_t>(c)];
      const std::size_t K = corridor_length(m, C, ws.weight(u, v));
      edges.push_back({u, v, C / static_cast<double>(K), c});
      out.corridor_lengths.push_back(K);
    }
  }
  const double md = static_cast<double>(m);
  out.graph = MeasuredGraph(std::vector<double>(ca.N, md * md * md * block_volume), edges);
  return out;
}

std::string write_network_bookkeeping(const MacroNetwork& net) {
  auto labels = [](const std::vector<std::size_t>& xs) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t x : xs) a.push_back(x == kUnassigned ? -1 : static_cast<long long>(x));
    return a;
  };
  nlohmann::json j;
  j["m"] = net.m;
  j["N"] = net.N;
  j["seed"] = net.seed;
  j["block_nodes"] = net.block_nodes;
  j["block_volume"] = net.block_volume;
  nlohmann::json edges = nlohmann::json::array();
  for (const MacroEdge& e : net.edges) {
    edges.push_back({{"u", e.u}, {"v", e.v}, {"color", e.color}, {"w_star", e.w_star}, {"K", e.K}});
  }
  j["edges"] = std::move(edges);
  nlohmann::json wirings = nlohmann::json::array();
  for (const ClusterWiring& w : net.wirings) {
    nlohmann::json ports = nlohmann::json::array();
    for (const PortEdge& p : w.ports) {
      ports.push_back({{"color", p.color}, {"out", p.out_node}, {"in", p.in_node}});
    }
    wirings.push_back({{"seed", w.seed},
                       {"resamples", w.resamples},
                       {"adjacency_lambda2", w.gap.adjacency_lambda2},
                       {"lambda1_after", w.gap.lambda1_after},
                       {"ports", std::move(ports)}});
  }
  j["clusters"] = std::move(wirings);
  j["cluster_of"] = labels(net.cluster_of);
  j["corridor_of"] = labels(net.corridor_of);
  j["corridor_position"] = labels(net.corridor_position);
  return j.dump() + "\n";
}

}  // namespace heavynet
