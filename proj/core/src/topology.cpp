#include "heavynet/topology.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "heavynet/errors.hpp"
#include "heavynet/graph_io.hpp"

namespace heavynet {

int ColorAssignment::color_of(NodeId u, NodeId v) const {
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    if (next(c, u) == v || next(c, v) == u) return static_cast<int>(c);
  }
  return -1;
}

NodeId ColorAssignment::next(std::size_t color, NodeId v) const {
  const auto& cyc = cycles.at(color);
  const auto it = std::find(cyc.begin(), cyc.end(), v);
  if (it == cyc.end()) throw Error(ErrorCode::kInvalidArgument, "vertex not on cycle");
  const auto pos = static_cast<std::size_t>(it - cyc.begin());
  return cyc[(pos + 1) % cyc.size()];
}

void ColorAssignment::verify() const {
  if (N < 5 || N % 2 == 0) throw Error(ErrorCode::kInvalidArgument, "N must be odd and >= 5");
  if (cycles.size() != (N - 1) / 2) {
    throw Error(ErrorCode::kInvalidArgument, "expected (N-1)/2 cycles");
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& cyc = cycles[c];
    if (cyc.size() != N) throw Error(ErrorCode::kInvalidArgument, "cycle is not Hamiltonian");
    std::vector<int> out_deg(N, 0), in_deg(N, 0);
    for (std::size_t p = 0; p < N; ++p) {
      const NodeId a = cyc[p];
      const NodeId b = cyc[(p + 1) % N];
      if (a >= N || b >= N || a == b) throw Error(ErrorCode::kInvalidArgument, "bad vertex");
      ++out_deg[a];
      ++in_deg[b];
      if (!seen.insert({std::min(a, b), std::max(a, b)}).second) {
        throw Error(ErrorCode::kInvalidArgument, "cycles are not edge-disjoint");
      }
    }
    for (std::size_t v = 0; v < N; ++v) {
      if (out_deg[v] != 1 || in_deg[v] != 1) {
        throw Error(ErrorCode::kInvalidArgument, "per-color in/out degree is not 1");
      }
    }
  }
  if (seen.size() != N * (N - 1) / 2) {
    throw Error(ErrorCode::kInvalidArgument, "cycles do not cover K_N");
  }
}

ColorAssignment walecki_decomposition(std::size_t N, std::uint64_t orientation_seed) {
  if (N < 5 || N % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "Walecki decomposition needs odd N >= 5, got " + std::to_string(N));
  }
  const std::size_t ring = N - 1;  // vertices 0..N-2 on Z_ring, hub = N-1
  const NodeId hub = N - 1;
  const std::size_t d = ring / 2;

  // zigzag 0, 1, ring-1, 2, ring-2, ..., d
  std::vector<NodeId> starter{0};
  for (std::size_t step = 1; starter.size() < ring; ++step) {
    starter.push_back(step);
    if (starter.size() < ring) starter.push_back(ring - step);
  }

  ColorAssignment ca;
  ca.N = N;
  std::mt19937_64 rng(orientation_seed);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t r = 0; r < d; ++r) {
    std::vector<NodeId> cyc{hub};
    for (NodeId s : starter) cyc.push_back((s + r) % ring);
    const bool flip = coin(rng);
    if (flip) std::reverse(cyc.begin() + 1, cyc.end());
    ca.cycles.push_back(std::move(cyc));
    ca.reversed.push_back(flip);
  }
  ca.verify();
  return ca;
}

std::string write_color_assignment(const ColorAssignment& ca) {
  std::string out;
  for (const auto& cyc : ca.cycles) {
    for (std::size_t p = 0; p < cyc.size(); ++p) {
      if (p) out += ' ';
      out += std::to_string(cyc[p]);
    }
    out += '\n';
  }
  return out;
}

ColorAssignment read_color_assignment(std::string_view text) {
  ColorAssignment ca;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<NodeId> cyc;
    NodeId v = 0;
    while (ls >> v) cyc.push_back(v);
    if (!cyc.empty()) ca.cycles.push_back(std::move(cyc));
  }
  if (ca.cycles.empty()) throw Error(ErrorCode::kParse, "no cycles in color assignment");
  ca.N = ca.cycles.front().size();
  ca.reversed.assign(ca.cycles.size(), false);
  ca.verify();
  return ca;
}

std::size_t genus_complete_construction(std::size_t N) {
  if (N < 4) throw Error(ErrorCode::kInvalidArgument, "N must be at least 4");
  return 1 + N * (N - 3) / 2;
}

void SurfaceModel::validate() const {
  if (vertex_genera.size() != dual_graph.vertex_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "one genus per vertex piece required");
  }
  if (!dual_graph.connected()) {
    throw Error(ErrorCode::kDisconnected, "dual graph must be connected");
  }
}

long euler_characteristic(const SurfaceModel& s) {
  s.validate();
  long chi = 0;
  for (std::size_t v = 0; v < s.dual_graph.vertex_count(); ++v) {
    chi += 2 - 2 * static_cast<long>(s.vertex_genera[v]) -
           static_cast<long>(s.dual_graph.degree(v));
  }
  return chi;
}

std::size_t euler_genus_of_dual(const SurfaceModel& s) {
  const long chi = euler_characteristic(s);
  if (chi % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "odd Euler characteristic");
  const long genus = 1 - chi / 2;
  if (genus < 0) throw Error(ErrorCode::kInvalidArgument, "negative genus");
  return static_cast<std::size_t>(genus);
}

SurfaceModel read_surface_model(std::string_view json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    auto areas = j.at("areas").get<std::vector<double>>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(),
                       e.at(2).get<double>(), std::nullopt});
    }
    SurfaceModel s;
    const std::size_t n = areas.size();
    s.dual_graph = MeasuredGraph(std::move(areas), edges);
    s.vertex_genera = j.contains("genera") ? j.at("genera").get<std::vector<std::size_t>>()
                                           : std::vector<std::size_t>(n, 0);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParse, ex.what());
  }
}

std::string write_surface_model(const SurfaceModel& s) {
  nlohmann::json j;
  j["areas"] = std::vector<double>(s.dual_graph.measures().begin(), s.dual_graph.measures().end());
  j["genera"] = s.vertex_genera;
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : s.dual_graph.edges()) edges.push_back({e.u, e.v, e.weight});
  j["edges"] = std::move(edges);
  return j.dump(1) + "\n";
}

}  // namespace heavynet
