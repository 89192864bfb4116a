#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "heavynet/eigensolvers.hpp"
#include "heavynet/homogenization.hpp"
#include "heavynet/inverse_spectral.hpp"
#include "heavynet/topology.hpp"

namespace heavynet {

// Empirical regression guards. None of these is a constant from the theory;
// each was set from a calibration run and is reported as a guard.
struct HarnessThresholds {
  double reduction_error = 0.2;         // max_k |nu_k / lambda_k(L_m) - 1| at the largest m
  double rescaled_error = 0.25;         // |m^4 nu_k / lambda_k* - 1| for k <= n
  double parasitic_fraction = 0.5;      // m^2 nu_N >= fraction * first value
  double corridor_mass_const = 10.0;    // corridor mass <= const / m^2
  double scaling_const = 10.0;          // |m^4 lambda_k(L_m) / mu_k - 1| <= const / m
  double ratio_error = 0.05;            // lambda_2 / lambda_1 against the target ratio
  double simplicity_fraction = 0.5;     // measured relative gaps >= fraction * target gaps
  double cheeger_floor = 0.05;          // post-deletion spectral Cheeger lower bound
};

struct SweepOptions {
  PrescribeOptions prescribe;
  AssemblyOptions assembly;
  double eigen_tol = 1e-10;
  std::size_t dense_threshold = kDefaultDenseThreshold;
  HarnessThresholds thresholds;
};

struct ConvergenceRow {
  std::size_t m = 0;
  bool ok = false;
  std::string error;
  std::size_t nodes = 0;
  std::vector<std::size_t> corridor_lengths;
  std::vector<double> nu;              // nu_0 .. nu_N of the assembled network
  std::vector<double> residuals;
  std::string method;
  std::vector<double> macro;           // lambda_0 .. lambda_{N-1} of L_m
  std::vector<double> ratios;          // nu_k / lambda_k(L_m), k = 1 .. N-1
  std::vector<double> rescaled;        // m^4 nu_k, k = 0 .. N
  double parasitic = 0.0;              // m^2 nu_N
  std::vector<double> corridor_mass;   // per eigenvector 0 .. N
  std::vector<double> flatness;        // per eigenvector 0 .. N
  double min_cluster_gap = 0.0;
  double flatness_guard = 0.0;         // 1 / min_cluster_gap
  double seconds = 0.0;

  double max_reduction_error() const;
};

struct Verdict {
  std::string criterion;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ConvergenceReport {
  SpectralTarget target;
  std::vector<double> mu;  // padded targets fed to the prescription
  WeightSolution weights;
  ColorAssignment colors;
  std::vector<double> cell_conductances;
  double block_volume = 1.0;
  std::uint64_t seed = 0;
  HarnessThresholds thresholds;
  std::vector<ConvergenceRow> rows;  // ascending m
  std::vector<double> rate_fits;     // log-log slope of |ratio - 1| per k = 1 .. N-1
  double c0_fit = 0.0;               // smallest m^2 nu_N seen; empirical
  std::vector<Verdict> verdicts;

  const ConvergenceRow* largest_ok() const;
};

// Prescribes once, then per m assembles, solves the N+1 smallest pairs and
// fills every column. Stage failures are stored on the row; the sweep goes on.
ConvergenceReport sweep_convergence(const SpectralTarget& t, const BlockModel& b,
                                    std::vector<std::size_t> m_list, std::uint64_t seed,
                                    const SweepOptions& options = {});

// Sum over corridor nodes of measure * u^2, per eigenvector. Vectors are
// re-orthonormalized in the measure inner product first.
std::vector<double> corridor_mass_profile(const MacroNetwork& net, const EigenResult& eig);

// Sum over clusters of measure * (u - cluster mean)^2, per eigenvector.
std::vector<double> cluster_flatness_profile(const MacroNetwork& net, const EigenResult& eig);

// Neumann gap of each cluster's induced graph.
std::vector<double> cluster_gaps(const MacroNetwork& net, double tol, std::uint64_t seed,
                                 std::size_t dense_threshold = WiringOptions{}.dense_threshold);

// Least-squares slope of log y against log x over the positive entries.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct RatioRow {
  std::size_t m = 0;
  std::vector<double> ratios;         // lambda_i / lambda_1, i = 1 .. n
  std::vector<double> target_ratios;  // lambda_i* / lambda_1*
  std::vector<double> ratio_errors;
  double max_ratio_error = 0.0;
  double delta = 0.0;       // max_i |m^4 nu_i / lambda_1* - lambda_i* / lambda_1*|
  bool delta_qualifies = false;  // delta <= 1/2
  double bound = 0.0;       // 2 delta (1 + mu_n*)
  bool bound_holds = true;  // vacuous unless delta qualifies
  double epsilon_delta = 0.0;    // min(1/2, eps / (2 + 2 mu_n*))
  bool epsilon_holds = true;     // delta <= epsilon_delta implies max error <= eps
};

// Inequality check on one list of measured eigenvalues (already rescaled).
RatioRow ratio_row(const SpectralTarget& t, std::size_t m, const std::vector<double>& measured);

struct RatioReport {
  std::vector<RatioRow> rows;
  bool all_bounds_hold() const;
};
RatioReport ratio_report(const SpectralTarget& t, const ConvergenceReport& report);

struct Example013Check {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Example013Report {
  P3Weights weights;
  std::vector<double> spectrum;
  std::size_t genus = 0;
  std::vector<double> deltas;
  std::vector<std::vector<double>> rescaled;  // per delta
  std::vector<Example013Check> checks;
  bool all_pass() const;
};

// The two-eigenvalue surface example with targets (1, 3) on the path P3.
Example013Report example_013(const std::vector<double>& deltas = {1e-1, 1e-2, 1e-3});

}  // namespace heavynet
