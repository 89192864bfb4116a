#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "heavynet/graph_io.hpp"

namespace heavynet::testing {

inline std::filesystem::path data_dir() { return HEAVYNET_TEST_DATA_DIR; }

struct NamedGraph {
  std::string name;
  MeasuredGraph graph;
};

// Every *.graph file in tests/data, sorted by name.
inline std::vector<NamedGraph> corpus() {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir())) {
    if (entry.path().extension() == ".graph") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<NamedGraph> out;
  for (const auto& p : paths) out.push_back({p.stem().string(), load_graph(p)});
  return out;
}

// Spanning path plus random chords; weights and measures log-uniform.
inline MeasuredGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, std::size_t chords) {
  std::uniform_real_distribution<double> logw(std::log(0.1), std::log(10.0));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, std::exp(logw(rng)), {}});
  for (std::size_t c = 0; c < chords; ++c) {
    const std::size_t u = pick(rng), v = pick(rng);
    if (u != v) edges.push_back({u, v, std::exp(logw(rng)), {}});
  }
  std::vector<double> measures(n);
  for (double& x : measures) x = std::exp(logw(rng));
  return MeasuredGraph(std::move(measures), edges);
}

}  // namespace heavynet::testing
