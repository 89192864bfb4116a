#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "heavynet/harness.hpp"

namespace heavynet {

// Every tunable default in one place. Serialized as JSON; a file may set any
// subset of keys and unknown keys are rejected.
struct Config {
  std::uint64_t seed = 0;

  std::vector<double> targets = {1.0, 3.0};
  double epsilon = 0.5;
  std::size_t N = 5;
  std::vector<double> padding;  // empty: default ramp

  std::string block = "single";  // "single" or "diamond"
  double block_volume = 1.0;
  double port_conductance = 1.0;

  std::vector<std::size_t> m_list = {4, 6, 8, 12, 16};
  std::vector<double> pinch_deltas = {1e-1, 1e-2, 1e-3};

  SweepOptions sweep;  // prescription, wiring, eigen tolerance, guards

  SpectralTarget target() const;
  BlockModel block_model(std::size_t D) const;
};

Config read_config(std::string_view json_text);
std::string write_config(const Config& c);

}  // namespace heavynet
