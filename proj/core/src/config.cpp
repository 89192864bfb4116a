#include "heavynet/config.hpp"

#include <set>

#include <json.hpp>

#include "heavynet/errors.hpp"

namespace heavynet {

namespace {

using nlohmann::json;

// Copies j[key] into out when present; records the key as consumed.
template <typename T>
void take(const json& j, const char* key, T& out, std::set<std::string>& seen) {
  seen.insert(key);
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, const std::set<std::string>& seen, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!seen.count(it.key())) {
      throw Error(ErrorCode::kParse, "unknown config key '" + where + it.key() + "'");
    }
  }
}

}  // namespace

SpectralTarget Config::target() const {
  SpectralTarget t = make_target(targets, epsilon, N);
  t.padding = padding;
  return t;
}

BlockModel Config::block_model(std::size_t D) const {
  if (block == "single") return BlockModel::single_node(D, block_volume, port_conductance);
  if (block == "diamond") return BlockModel::diamond(D, block_volume);
  throw Error(ErrorCode::kInvalidArgument, "unknown block '" + block + "'");
}

Config read_config(std::string_view json_text) {
  Config c;
  try {
    const json j = json::parse(json_text);
    std::set<std::string> seen;
    take(j, "seed", c.seed, seen);
    take(j, "targets", c.targets, seen);
    take(j, "epsilon", c.epsilon, seen);
    take(j, "N", c.N, seen);
    take(j, "padding", c.padding, seen);
    take(j, "block", c.block, seen);
    take(j, "block_volume", c.block_volume, seen);
    take(j, "port_conductance", c.port_conductance, seen);
    take(j, "m_list", c.m_list, seen);
    take(j, "pinch_deltas", c.pinch_deltas, seen);
    take(j, "eigen_tol", c.sweep.eigen_tol, seen);
    take(j, "dense_threshold", c.sweep.dense_threshold, seen);

    seen.insert("prescribe");
    if (j.contains("prescribe")) {
      const json& p = j.at("prescribe");
      std::set<std::string> ps;
      PrescribeOptions& o = c.sweep.prescribe;
      take(p, "tol", o.tol, ps);
      take(p, "restarts", o.restarts, ps);
      take(p, "iterations", o.iterations, ps);
      take(p, "positivity_floor", o.positivity_floor, ps);
      take(p, "init_spread", o.init_spread, ps);
      take(p, "degeneracy_gap", o.degeneracy_gap, ps);
      reject_unknown(p, ps, "prescribe.");
    }
    seen.insert("wiring");
    if (j.contains("wiring")) {
      const json& w = j.at("wiring");
      std::set<std::string> ws;
      WiringOptions& o = c.sweep.assembly.wiring;
      take(w, "gap_slack", o.gap_slack, ws);
      take(w, "resample_budget", o.resample_budget, ws);
      take(w, "permutation_draws", o.permutation_draws, ws);
      take(w, "dense_threshold", o.dense_threshold, ws);
      take(w, "eigen_tol", o.eigen_tol, ws);
      reject_unknown(w, ws, "wiring.");
    }
    seen.insert("thresholds");
    if (j.contains("thresholds")) {
      const json& t = j.at("thresholds");
      std::set<std::string> ts;
      HarnessThresholds& o = c.sweep.thresholds;
      take(t, "reduction_error", o.reduction_error, ts);
      take(t, "rescaled_error", o.rescaled_error, ts);
      take(t, "parasitic_fraction", o.parasitic_fraction, ts);
      take(t, "corridor_mass_const", o.corridor_mass_const, ts);
      take(t, "scaling_const", o.scaling_const, ts);
      take(t, "ratio_error", o.ratio_error, ts);
      take(t, "simplicity_fraction", o.simplicity_fraction, ts);
      take(t, "cheeger_floor", o.cheeger_floor, ts);
      reject_unknown(t, ts, "thresholds.");
    }
    reject_unknown(j, seen, "");
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kParse, ex.what());
  }
  return c;
}

std::string write_config(const Config& c) {
  const PrescribeOptions& p = c.sweep.prescribe;
  const WiringOptions& w = c.sweep.assembly.wiring;
  const HarnessThresholds& t = c.sweep.thresholds;
  json j;
  j["seed"] = c.seed;
  j["targets"] = c.targets;
  j["epsilon"] = c.epsilon;
  j["N"] = c.N;
  j["padding"] = c.padding;
  j["block"] = c.block;
  j["block_volume"] = c.block_volume;
  j["port_conductance"] = c.port_conductance;
  j["m_list"] = c.m_list;
  j["pinch_deltas"] = c.pinch_deltas;
  j["eigen_tol"] = c.sweep.eigen_tol;
  j["dense_threshold"] = c.sweep.dense_threshold;
  j["prescribe"] = {{"tol", p.tol},
                    {"restarts", p.restarts},
                    {"iterations", p.iterations},
                    {"positivity_floor", p.positivity_floor},
                    {"init_spread", p.init_spread},
                    {"degeneracy_gap", p.degeneracy_gap}};
  j["wiring"] = {{"gap_slack", w.gap_slack},
                 {"resample_budget", w.resample_budget},
                 {"permutation_draws", w.permutation_draws},
                 {"dense_threshold", w.dense_threshold},
                 {"eigen_tol", w.eigen_tol}};
  j["thresholds"] = {{"reduction_error", t.reduction_error},
                     {"rescaled_error", t.rescaled_error},
                     {"parasitic_fraction", t.parasitic_fraction},
                     {"corridor_mass_const", t.corridor_mass_const},
                     {"scaling_const", t.scaling_const},
                     {"ratio_error", t.ratio_error},
                     {"simplicity_fraction", t.simplicity_fraction},
                     {"cheeger_floor", t.cheeger_floor}};
  return j.dump(2) + "\n";
}

}  // namespace heavynet
