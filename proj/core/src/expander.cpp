#include "heavynet/expander.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "heavynet/eigensolvers.hpp"
#include "heavynet/errors.hpp"

namespace heavynet {

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

MeasuredGraph unit_copy(const MeasuredGraph& g) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (Edge& e : edges) e.weight = 1.0;
  return MeasuredGraph::with_unit_measures(g.vertex_count(), edges);
}

double laplacian_gap(const MeasuredGraph& g, const WiringOptions& o, std::uint64_t seed) {
  IterativeOptions it;
  it.tol = o.eigen_tol;
  it.seed = seed;
  if (g.vertex_count() <= o.dense_threshold) return spectrum_dense(g, false, o.dense_threshold).eigenvalues[1];
  return spectrum_smallest_k(g, 2, it).eigenvalues[1];
}

// Draws one color class avoiding fixed points, 2-cycles and pairs already used.
bool draw_class(std::size_t size, std::mt19937_64& rng, std::unordered_set<std::uint64_t>& used,
                std::size_t budget, std::vector<NodeId>& perm) {
  perm.resize(size);
  for (std::size_t draw = 0; draw < budget; ++draw) {
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::unordered_set<std::uint64_t> mine;
    mine.reserve(2 * size);
    bool ok = true;
    for (NodeId t = 0; t < size && ok; ++t) {
      const NodeId s = perm[t];
      if (s == t) {
        ok = false;
        break;
      }
      const auto key = pair_key(t, s);
      if (used.count(key) || !mine.insert(key).second) ok = false;
    }
    if (ok) {
      used.insert(mine.begin(), mine.end());
      return true;
    }
  }
  return false;
}

}  // namespace

bool ClusterWiring::is_port_edge(std::size_t color, NodeId t) const {
  for (const PortEdge& p : ports) {
    if (p.color == color && p.out_node == t) return true;
  }
  return false;
}

MeasuredGraph ClusterWiring::graph(bool drop_ports) const {
  std::vector<Edge> edges;
  edges.reserve(size * D);
  for (std::size_t i = 0; i < D; ++i) {
    for (NodeId t = 0; t < size; ++t) {
      if (drop_ports && is_port_edge(i, t)) continue;
      edges.push_back({t, permutations[i][t], 1.0, static_cast<int>(i)});
    }
  }
  return MeasuredGraph::with_unit_measures(size, edges);
}

ClusterWiring sample_wiring(std::size_t size, std::size_t D, std::uint64_t seed,
                            const WiringOptions& options) {
  if (D < 2) throw Error(ErrorCode::kInvalidArgument, "expander wiring needs D >= 2");
  if (size <= 4 * D) {
    throw Error(ErrorCode::kInvalidArgument,
                "cluster size " + std::to_string(size) + " must exceed 4D = " +
                    std::to_string(4 * D));
  }
  const double friedman = 2.0 * std::sqrt(2.0 * static_cast<double>(D) - 1.0);
  std::string best_shortfall = "no simple candidate drawn";
  double best_lambda2 = std::numeric_limits<double>::infinity();

  for (std::size_t attempt = 0; attempt < options.resample_budget; ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt), 0x5eedu};
    std::mt19937_64 rng(seq);
    ClusterWiring w;
    w.size = size;
    w.D = D;
    w.seed = seed;
    w.resamples = attempt;
    std::unordered_set<std::uint64_t> used;
    used.reserve(2 * size * D);
    bool simple = true;
    for (std::size_t i = 0; i < D && simple; ++i) {
      std::vector<NodeId> perm;
      simple = draw_class(size, rng, used, options.permutation_draws, perm);
      w.permutations.push_back(std::move(perm));
    }
    if (!simple) continue;

    const MeasuredGraph g = w.graph(false);
    if (!g.connected()) {
      best_shortfall = "disconnected candidate";
      continue;
    }
    w.gap.friedman_bound = friedman;
    w.gap.slack = options.gap_slack;
    w.gap.lambda1_before = laplacian_gap(g, options, seed + attempt);
    // 2D-regular: adjacency = 2D I - Laplacian
    w.gap.adjacency_lambda2 = 2.0 * static_cast<double>(D) - w.gap.lambda1_before;
    if (!w.gap.gap_ok()) {
      if (w.gap.adjacency_lambda2 < best_lambda2) {
        best_lambda2 = w.gap.adjacency_lambda2;
        std::ostringstream msg;
        msg << "adjacency lambda2 " << best_lambda2 << " exceeds " << friedman << " + "
            << options.gap_slack;
        best_shortfall = msg.str();
      }
      continue;
    }
    return w;
  }
  throw Error(ErrorCode::kResampleBudget,
              std::to_string(options.resample_budget) + " candidates rejected; best: " +
                  best_shortfall);
}

ClusterWiring sample_wiring(std::size_t size, std::size_t D, std::uint64_t seed,
                            double gap_slack) {
  WiringOptions o;
  o.gap_slack = gap_slack;
  return sample_wiring(size, D, seed, o);
}

ClusterWiring expose_ports(const ClusterWiring& w, std::uint64_t seed,
                           const WiringOptions& options) {
  if (w.has_ports()) throw Error(ErrorCode::kInvalidArgument, "ports already exposed");
  if (w.permutations.size() != w.D || w.D == 0) {
    throw Error(ErrorCode::kInvalidArgument, "wiring has no color classes");
  }
  constexpr int kShuffles = 16;
  for (int round = 0; round < kShuffles; ++round) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(round), 0x9047u};
    std::mt19937_64 rng(seq);
    ClusterWiring out = w;
    std::vector<bool> taken(w.size, false);
    bool found_all = true;
    for (std::size_t i = 0; i < w.D; ++i) {
      std::vector<NodeId> order(w.size);
      std::iota(order.begin(), order.end(), NodeId{0});
      std::shuffle(order.begin(), order.end(), rng);
      bool found = false;
      for (NodeId t : order) {
        const NodeId s = w.permutations[i][t];
        if (!taken[t] && !taken[s]) {
          taken[t] = taken[s] = true;
          out.ports.push_back({i, t, s});
          found = true;
          break;
        }
      }
      if (!found) {
        found_all = false;
        break;
      }
    }
    if (!found_all) {
      throw Error(ErrorCode::kInternal, "no vertex-disjoint port edges (size <= 4D?)");
    }
    const MeasuredGraph g = out.graph(true);
    if (!g.connected()) continue;
    out.gap.lambda1_after = laplacian_gap(g, options, seed + 7919);
    return out;
  }
  throw Error(ErrorCode::kInternal, "port deletion disconnected every candidate choice");
}

double cheeger_exact(const MeasuredGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > 20) throw Error(ErrorCode::kSizeTooLarge, "exhaustive Cheeger needs <= 20 vertices");
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two vertices");
  std::vector<std::uint32_t> adj(n, 0);
  for (const Edge& e : g.edges()) {
    adj[e.u] |= 1u << e.v;
    adj[e.v] |= 1u << e.u;
  }
  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int size = std::popcount(s);
    if (2 * static_cast<std::size_t>(size) > n) continue;
    int boundary = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (s & (1u << v)) boundary += std::popcount(adj[v] & ~s & full);
    }
    best = std::min(best, static_cast<double>(boundary) / size);
  }
  return best;
}

CheegerBounds cheeger_bounds(const MeasuredGraph& g) {
  if (!g.connected()) throw Error(ErrorCode::kDisconnected, "Cheeger bounds need a connected graph");
  if (g.vertex_count() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two vertices");
  const MeasuredGraph unit = unit_copy(g);
  CheegerBounds b;
  IterativeOptions it;
  it.tol = 1e-10;
  b.lambda1 = spectrum_smallest_auto(unit, 2, it).eigenvalues[1];
  b.max_degree = unit.max_degree();
  b.lower = 0.5 * b.lambda1;
  const double dmax = static_cast<double>(b.max_degree);
  const std::size_t n = unit.vertex_count();
  const bool small_complete = n <= 3 && unit.edge_count() == n * (n - 1) / 2;
  if (small_complete) {
    std::size_t dmin = n;
    for (std::size_t v = 0; v < n; ++v) dmin = std::min(dmin, unit.degree(v));
    b.upper = static_cast<double>(dmin);
  } else {
    b.upper = std::sqrt(std::max(0.0, b.lambda1 * (2.0 * dmax - b.lambda1)));
  }
  return b;
}

std::string write_wiring_json(const ClusterWiring& w) {
  nlohmann::json j;
  j["size"] = w.size;
  j["D"] = w.D;
  j["seed"] = w.seed;
  j["resamples"] = w.resamples;
  j["permutations"] = w.permutations;
  nlohmann::json ports = nlohmann::json::array();
  for (const PortEdge& p : w.ports) {
    ports.push_back({{"color", p.color}, {"out", p.out_node}, {"in", p.in_node}});
  }
  j["ports"] = std::move(ports);
  j["gap"] = {{"adjacency_lambda2", w.gap.adjacency_lambda2},
              {"friedman_bound", w.gap.friedman_bound},
              {"slack", w.gap.slack},
              {"lambda1_before", w.gap.lambda1_before},
              {"lambda1_after", w.gap.lambda1_after}};
  return j.dump(1) + "\n";
}

ClusterWiring read_wiring_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ClusterWiring w;
    w.size = j.at("size").get<std::size_t>();
    w.D = j.at("D").get<std::size_t>();
    w.seed = j.value("seed", std::uint64_t{0});
    w.resamples = j.value("resamples", std::size_t{0});
    w.permutations = j.at("permutations").get<std::vector<std::vector<NodeId>>>();
    for (const auto& p : j.at("ports")) {
      w.ports.push_back({p.at("color").get<std::size_t>(), p.at("out").get<NodeId>(),
                         p.at("in").get<NodeId>()});
    }
    if (j.contains("gap")) {
      const auto& gj = j.at("gap");
      w.gap.adjacency_lambda2 = gj.at("adjacency_lambda2").get<double>();
      w.gap.friedman_bound = gj.at("friedman_bound").get<double>();
      w.gap.slack = gj.at("slack").get<double>();
      w.gap.lambda1_before = gj.at("lambda1_before").get<double>();
      w.gap.lambda1_after = gj.at("lambda1_after").get<double>();
    }
    if (w.permutations.size() != w.D) throw Error(ErrorCode::kParse, "permutation count != D");
    for (const auto& p : w.permutations) {
      if (p.size() != w.size) throw Error(ErrorCode::kParse, "permutation length != size");
    }
    return w;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParse, ex.what());
  }
}

}  // namespace heavynet
