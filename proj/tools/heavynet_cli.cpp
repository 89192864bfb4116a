// heavynet: prescribe graph spectra, assemble heavy-vertex networks and run
// the convergence experiments. Exit codes: 0 success, 1 error, 3 a reported
// check failed.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heavynet/config.hpp"
#include "heavynet/eigensolvers.hpp"
#include "heavynet/errors.hpp"
#include "heavynet/expander.hpp"
#include "heavynet/graph_io.hpp"
#include "heavynet/harness.hpp"
#include "heavynet/homogenization.hpp"
#include "heavynet/inverse_spectral.hpp"
#include "heavynet/report.hpp"
#include "heavynet/surface.hpp"
#include "heavynet/topology.hpp"

namespace fs = std::filesystem;
using namespace heavynet;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out = "out";
  std::string format = "csv";
};

struct Context {
  Config cfg;
  fs::path out;
  ReportFormat format = ReportFormat::kCsv;
};

Context make_context(const Globals& g) {
  Context c;
  if (!g.config_path.empty()) c.cfg = read_config(read_file(g.config_path));
  if (g.seed) c.cfg.seed = *g.seed;
  c.out = g.out;
  c.format = parse_report_format(g.format);
  return c;
}

int finish(const Context& c, std::string_view stem, const Table& t,
           const std::vector<std::pair<std::string, std::string>>& extra,
           const std::vector<Verdict>& verdicts, std::string_view command) {
  const fs::path p = emit_report(c.out, stem, t, report_metadata(command, c.cfg, extra, verdicts), c.format);
  std::cout << "wrote " << p.string() << "\n";
  for (const Verdict& v : verdicts) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.criterion << " value=" << v.value
              << " threshold=" << v.threshold << "\n";
  }
  for (const Verdict& v : verdicts) {
    if (!v.pass) return 3;
  }
  return 0;
}

std::string fmt(double x) { return format_double(x); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heavynet: spectral prescription and heavy-vertex network experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master seed (overrides the config)");
  app.add_option("--config", g.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--format", g.format, "Table format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // prescribe
  auto* prescribe = app.add_subcommand("prescribe", "Weights on K_N with a prescribed spectrum");
  std::vector<double> p_targets;
  std::size_t p_N = 0;
  double p_measure = 1.0;
  bool p_pad = false;
  prescribe->add_option("--targets", p_targets, "Nonzero eigenvalues (or leading targets with --pad)");
  prescribe->add_option("--N", p_N, "Vertex count");
  prescribe->add_option("--measure", p_measure, "Constant vertex measure")->capture_default_str();
  prescribe->add_flag("--pad", p_pad, "Treat --targets as targets and fill the rest with padding");

  // assemble
  auto* assemble = app.add_subcommand("assemble", "Build the heavy-vertex network at one scale");
  std::size_t a_m = 4;
  assemble->add_option("--m", a_m, "Scale parameter")->capture_default_str();

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Smallest eigenpairs of a graph file");
  std::string s_graph;
  std::size_t s_k = 6;
  std::string s_method = "auto";
  double s_tol = 1e-10;
  spectrum->add_option("graph", s_graph, "Graph file (.json or text)")->required()->check(CLI::ExistingFile);
  spectrum->add_option("--k", s_k, "Number of pairs")->capture_default_str();
  spectrum->add_option("--method", s_method, "auto, dense or iterative")
      ->check(CLI::IsMember({"auto", "dense", "iterative"}))
      ->capture_default_str();
  spectrum->add_option("--tol", s_tol, "Residual tolerance (iterative)")->capture_default_str();

  // sweep / ratios
  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over m");
  std::vector<std::size_t> sw_m;
  sweep->add_option("--m", sw_m, "Scale list (ascending)");
  auto* ratios = app.add_subcommand("ratios", "Ratio table and bound check from a sweep");
  ratios->add_option("--m", sw_m, "Scale list (ascending)");

  // surface
  auto* surface = app.add_subcommand("surface", "Pinch model of a surface and rescaled spectra");
  std::string su_model;
  std::vector<double> su_deltas;
  surface->add_option("--model", su_model, "Surface model JSON (default: the P3 example)")
      ->check(CLI::ExistingFile);
  surface->add_option("--delta", su_deltas, "Pinching parameters");

  // cluster-gap
  auto* gap = app.add_subcommand("cluster-gap", "Sample expander wirings and report gaps");
  std::vector<std::size_t> cg_sizes = {64, 256, 1000};
  std::vector<std::size_t> cg_D = {2, 3};
  std::size_t cg_trials = 3;
  gap->add_option("--size", cg_sizes, "Cluster sizes")->capture_default_str();
  gap->add_option("--D", cg_D, "Color counts")->capture_default_str();
  gap->add_option("--trials", cg_trials, "Wirings per configuration")->capture_default_str();

  auto* ex013 = app.add_subcommand("example-013", "Targets (1, 3) on the path P3");

  CLI11_PARSE(app, argc, argv);

  try {
    Context c = make_context(g);
    if (*prescribe) {
      if (!p_targets.empty()) c.cfg.targets = p_targets;
      if (p_N) c.cfg.N = p_N;
      std::vector<double> mu = c.cfg.targets;
      std::size_t N = c.cfg.N;
      if (p_pad) {
        mu = pad_targets(c.cfg.target(), p_measure);
      } else if (!p_N) {
        N = mu.size() + 1;
      }
      PrescribeOptions po = c.cfg.sweep.prescribe;
      po.seed = c.cfg.seed;
      const WeightSolution ws = prescribe_complete_graph(N, p_measure, mu, po);
      save_graph(ws.graph(), c.out / "prescribed.graph");
      Table t;
      t.columns = {"u", "v", "weight"};
      for (const Edge& e : ws.weights) t.add_row({std::to_string(e.u), std::to_string(e.v), fmt(e.weight)});
      std::string achieved;
      for (double x : ws.achieved_spectrum) achieved += (achieved.empty() ? "" : ";") + fmt(x);
      return finish(c, "prescribe", t,
                    {{"mismatch", fmt(ws.mismatch)},
                     {"restarts_used", std::to_string(ws.restarts_used)},
                     {"achieved_spectrum", achieved}},
                    {}, "prescribe");
    }
    if (*assemble) {
      const SpectralTarget t = c.cfg.target();
      t.validate_for_assembly();
      const ColorAssignment ca = walecki_decomposition(t.N, derive_seed(c.cfg.seed, 3));
      const BlockModel b = c.cfg.block_model(ca.colors());
      PrescribeOptions po = c.cfg.sweep.prescribe;
      po.seed = derive_seed(c.cfg.seed, 6);
      const WeightSolution ws = prescribe_complete_graph(t.N, 1.0, pad_targets(t, b.volume()), po);
      const MacroNetwork net = assemble_network(t, ws, b, ca, a_m, derive_seed(c.cfg.seed, 4, a_m),
                                                c.cfg.sweep.assembly);
      const std::string stem = "network_m" + std::to_string(a_m);
      save_graph(net.graph, c.out / (stem + ".graph"));
      write_file(c.out / (stem + ".labels.json"), write_network_bookkeeping(net));
      write_file(c.out / "colors.txt", write_color_assignment(ca));
      Table tab;
      tab.columns = {"u", "v", "color", "w_star", "K"};
      for (const MacroEdge& e : net.edges) {
        tab.add_row({std::to_string(e.u), std::to_string(e.v), std::to_string(e.color),
                     fmt(e.w_star), std::to_string(e.K)});
      }
      return finish(c, "assemble", tab,
                    {{"m", std::to_string(a_m)},
                     {"nodes", std::to_string(net.graph.vertex_count())},
                     {"edges", std::to_string(net.graph.edge_count())}},
                    {}, "assemble");
    }
    if (*spectrum) {
      const MeasuredGraph graph = load_graph(s_graph);
      IterativeOptions it;
      it.tol = s_tol;
      it.seed = c.cfg.seed;
      EigenResult eig;
      if (s_method == "dense") {
        eig = spectrum_dense(graph, false, graph.vertex_count());
      } else if (s_method == "iterative") {
        eig = spectrum_smallest_k(graph, s_k, it);
      } else {
        eig = spectrum_smallest_auto(graph, s_k, it, c.cfg.sweep.dense_threshold);
      }
      Table t;
      t.columns = {"k", "eigenvalue", "residual"};
      const auto count = std::min<Eigen::Index>(eig.eigenvalues.size(), static_cast<Eigen::Index>(s_k));
      for (Eigen::Index k = 0; k < count; ++k) {
        t.add_row({std::to_string(k), fmt(eig.eigenvalues[k]), fmt(eig.residuals[k])});
      }
      return finish(c, "spectrum", t,
                    {{"graph", s_graph}, {"method", std::string(to_string(eig.method))}}, {},
                    "spectrum");
    }
    if (*sweep || *ratios) {
      if (!sw_m.empty()) c.cfg.m_list = sw_m;
      const SpectralTarget t = c.cfg.target();
      const BlockModel b = c.cfg.block_model((t.N - 1) / 2);
      const ConvergenceReport r = sweep_convergence(t, b, c.cfg.m_list, c.cfg.seed, c.cfg.sweep);
      std::string rates;
      for (double x : r.rate_fits) rates += (rates.empty() ? "" : ";") + fmt(x);
      if (*sweep) {
        emit_report(c.out, "sweep_verdicts", verdict_table(r.verdicts),
                    report_metadata("sweep", c.cfg, {}, r.verdicts), c.format);
        return finish(c, "sweep", convergence_table(r),
                      {{"rate_fits", rates}, {"c0_fit_empirical", fmt(r.c0_fit)}}, r.verdicts,
                      "sweep");
      }
      const RatioReport rr = ratio_report(t, r);
      const Verdict v{"ratio_bound", rr.all_bounds_hold(), 0.0, 0.0,
                      "ratio errors within 2 delta (1 + mu_n*) whenever delta <= 1/2"};
      return finish(c, "ratios", ratio_table(rr), {}, {v}, "ratios");
    }
    if (*surface) {
      SurfaceModel model;
      if (su_model.empty()) {
        const P3Weights w = solve_p3_closed_form(1.0, 3.0);
        model = SurfaceModel{p3_graph(w.w12, w.w23), {1, 1, 1}};
      } else {
        model = read_surface_model(read_file(su_model));
      }
      const std::vector<double> deltas = su_deltas.empty() ? c.cfg.pinch_deltas : su_deltas;
      Table t;
      t.columns = {"delta", "curvature", "k", "pinched", "rescaled"};
      for (double d : deltas) {
        const EigenResult eig = spectrum_dense(pinch_model(model, d), false);
        const RescaledSpectrum rs = rescaled_spectrum(eig, d);
        for (std::size_t k = 0; k < rs.eigenvalues.size(); ++k) {
          t.add_row({fmt(d), fmt(rs.curvature), std::to_string(k),
                     fmt(eig.eigenvalues[static_cast<Eigen::Index>(k)]), fmt(rs.eigenvalues[k])});
        }
      }
      return finish(c, "surface", t, {{"genus", std::to_string(euler_genus_of_dual(model))}}, {},
                    "surface");
    }
    if (*gap) {
      Table t;
      t.columns = {"size", "D", "trial", "resamples", "adjacency_lambda2", "bound_with_slack",
                   "cheeger_lower_before", "cheeger_lower_after"};
      bool all_ok = true;
      double worst_cheeger = 1e300;
      const WiringOptions& wo = c.cfg.sweep.assembly.wiring;
      for (std::size_t size : cg_sizes) {
        for (std::size_t D : cg_D) {
          for (std::size_t trial = 0; trial < cg_trials; ++trial) {
            const std::uint64_t s = derive_seed(c.cfg.seed, 9, (size << 8) ^ (D << 4) ^ trial);
            const ClusterWiring w = expose_ports(sample_wiring(size, D, s, wo), s + 1, wo);
            all_ok = all_ok && w.gap.gap_ok();
            if (D == 2) worst_cheeger = std::min(worst_cheeger, w.gap.cheeger_lower_after());
            t.add_row({std::to_string(size), std::to_string(D), std::to_string(trial),
                       std::to_string(w.resamples), fmt(w.gap.adjacency_lambda2),
                       fmt(w.gap.friedman_bound + w.gap.slack), fmt(w.gap.cheeger_lower_before()),
                       fmt(w.gap.cheeger_lower_after())});
          }
        }
      }
      std::vector<Verdict> v = {{"adjacency_gap", all_ok, 0.0, 0.0, "every wiring within bound"}};
      if (worst_cheeger < 1e300) {
        const double floor = c.cfg.sweep.thresholds.cheeger_floor;
        v.push_back({"cheeger_floor_D2", worst_cheeger >= floor, worst_cheeger, floor,
                     "post-deletion spectral Cheeger lower bound"});
      }
      return finish(c, "cluster_gap", t, {}, v, "cluster-gap");
    }
    if (*ex013) {
      const Example013Report r = example_013(c.cfg.pinch_deltas);
      const Verdict v{"example_013", r.all_pass(), 0.0, 0.0, "all checks against closed-form values"};
      return finish(c, "example_013", example013_table(r), {{"genus", std::to_string(r.genus)}},
                    {v}, "example-013");
    }
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
