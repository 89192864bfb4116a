#include "heavynet/inverse_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "heavynet/errors.hpp"
#include "heavynet/graph_io.hpp"

namespace heavynet {

namespace {

void require_strictly_increasing_positive(std::span<const double> xs, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(std::isfinite(xs[i]) && xs[i] > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be positive");
    }
    if (i > 0 && !(xs[i] > xs[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " must be strictly increasing");
    }
  }
}

std::vector<double> nonzero_spectrum(const MeasuredGraph& g) {
  const EigenResult eig = spectrum_dense(g, false);
  return {eig.eigenvalues.data() + 1, eig.eigenvalues.data() + eig.eigenvalues.size()};
}

}  // namespace

void SpectralTarget::validate() const {
  if (targets.empty()) throw Error(ErrorCode::kInvalidArgument, "empty target list");
  require_strictly_increasing_positive(targets, "targets");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
  }
  if (N < std::max<std::size_t>(n() + 1, 4)) {
    throw Error(ErrorCode::kInvalidArgument,
                "N must be at least max(n+1, 4), got " + std::to_string(N));
  }
  if (!padding.empty() && padding.size() != N - 1 - n()) {
    throw Error(ErrorCode::kInvalidArgument,
                "padding must hold N-1-n = " + std::to_string(N - 1 - n()) + " values");
  }
}

void SpectralTarget::validate_for_assembly() const {
  validate();
  if (N % 2 == 0 || N < std::max<std::size_t>(n() + 1, 5)) {
    throw Error(ErrorCode::kInvalidArgument,
                "assembly needs odd N >= max(n+1, 5), got " + std::to_string(N));
  }
}

SpectralTarget make_target(std::vector<double> targets, double epsilon, std::size_t N) {
  SpectralTarget t;
  t.targets = std::move(targets);
  t.epsilon = epsilon >= 1.0 ? 0.5 : epsilon;
  t.N = N == 0 ? std::max<std::size_t>(t.targets.size() + 1, 4) : N;
  t.validate();
  return t;
}

std::vector<double> pad_targets(const SpectralTarget& t, double block_volume) {
  t.validate();
  if (!(block_volume > 0.0)) throw Error(ErrorCode::kInvalidArgument, "V_F must be positive");
  std::vector<double> mu;
  mu.reserve(t.N - 1);
  for (double x : t.targets) mu.push_back(x * block_volume);
  const std::size_t extra = t.N - 1 - t.n();
  const double floor = (t.targets.back() + 1.0) * block_volume;
  if (!t.padding.empty()) {
    require_strictly_increasing_positive(t.padding, "padding");
    if (!(t.padding.front() > floor)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "padding must lie strictly above (lambda_n + 1) V_F = " + format_double(floor));
    }
    mu.insert(mu.end(), t.padding.begin(), t.padding.end());
  } else {
    for (std::size_t j = 0; j < extra; ++j) {
      mu.push_back((t.targets.back() + 2.0 + static_cast<double>(j)) * block_volume);
    }
  }
  return mu;
}

double WeightSolution::weight(NodeId u, NodeId v) const {
  if (u > v) std::swap(u, v);
  for (const Edge& e : weights) {
    if (e.u == u && e.v == v) return e.weight;
  }
  return 0.0;
}

MeasuredGraph WeightSolution::graph() const {
  return MeasuredGraph(std::vector<double>(N, vertex_measure), weights);
}

Eigen::MatrixXd spectral_jacobian(const MeasuredGraph& g, const EigenResult& eig,
                                  double gap_threshold) {
  if (!eig.eigenvectors) {
    throw Error(ErrorCode::kInvalidArgument, "spectral_jacobian needs eigenvectors");
  }
  const Eigen::VectorXd& lam = eig.eigenvalues;
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 1; k < lam.size(); ++k) {
    if (lam[k] - lam[k - 1] < gap_threshold * scale) {
      throw Error(ErrorCode::kNearDegenerate,
                  "eigenvalues " + std::to_string(k - 1) + " and " + std::to_string(k) +
                      " are closer than the gap threshold");
    }
  }
  const Eigen::MatrixXd& vecs = *eig.eigenvectors;
  const auto edges = g.edges();
  Eigen::MatrixXd jac(lam.size(), static_cast<Eigen::Index>(edges.size()));
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const double d = vecs(static_cast<Eigen::Index>(edges[e].u), k) -
                       vecs(static_cast<Eigen::Index>(edges[e].v), k);
      jac(k, static_cast<Eigen::Index>(e)) = d * d;
    }
  }
  return jac;
}

TopologyFit fit_weights_on_topology(const MeasuredGraph& topology, std::span<const double> mu,
                                    const PrescribeOptions& options) {
  const std::size_t n = topology.vertex_count();
  const std::size_t ne = topology.edge_count();
  if (mu.size() + 1 != n) {
    throw Error(ErrorCode::kDimensionMismatch, "need vertex_count - 1 target eigenvalues");
  }
  require_strictly_increasing_positive(mu, "target spectrum");
  if (!topology.connected()) {
    throw Error(ErrorCode::kDisconnected, "topology must be connected");
  }

  const auto nm = static_cast<Eigen::Index>(mu.size());
  const auto nx = static_cast<Eigen::Index>(ne);
  Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(mu.data(), nm);

  // Trace of L is sum_e w_e (1/nu_u + 1/nu_v); match it at the start point.
  std::vector<double> trace_coeff(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const Edge& edge = topology.edges()[e];
    trace_coeff[e] = 1.0 / topology.measures()[edge.u] + 1.0 / topology.measures()[edge.v];
  }
  const double mu_sum = target.sum();

  struct Eval {
    EigenResult eig;
    Eigen::VectorXd residual;
    double cost = std::numeric_limits<double>::infinity();
  };
  auto evaluate = [&](const Eigen::VectorXd& x) {
    std::vector<double> w(ne);
    for (std::size_t e = 0; e < ne; ++e) w[e] = std::exp(x[static_cast<Eigen::Index>(e)]);
    Eval ev{spectrum_dense(topology.with_weights(w), true), {}, 0.0};
    ev.residual = ev.eig.eigenvalues.tail(nm) - target;
    ev.cost = 0.5 * ev.residual.squaredNorm();
    return ev;
  };
  auto min_rel_gap = [&](const Eigen::VectorXd& lam) {
    double g = std::numeric_limits<double>::infinity();
    const double s = std::max(1.0, lam.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 2; k < lam.size(); ++k) g = std::min(g, (lam[k] - lam[k - 1]) / s);
    return g;
  };

  double best_mismatch = std::numeric_limits<double>::infinity();
  bool boundary_hit = false;

  for (std::size_t restart = 0; restart < options.restarts; ++restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                      static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);

    Eigen::VectorXd x(nx);
    double denom = 0.0;
    for (Eigen::Index e = 0; e < nx; ++e) {
      x[e] = options.init_spread * normal(rng);
      denom += std::exp(x[e]) * trace_coeff[static_cast<std::size_t>(e)];
    }
    x.array() += std::log(mu_sum / denom);

    Eval cur = evaluate(x);
    double damping = -1.0;
    bool converged = false;
    for (std::size_t it = 0; it < options.iterations; ++it) {
      const double mismatch = cur.residual.cwiseAbs().maxCoeff();
      best_mismatch = std::min(best_mismatch, mismatch);
      // keep a margin so the independent re-solve also lands inside tol
      if (mismatch <= 0.5 * options.tol) {
        converged = true;
        break;
      }
      if (min_rel_gap(cur.eig.eigenvalues) < options.degeneracy_gap) {
        for (Eigen::Index e = 0; e < nx; ++e) x[e] += 1e-3 * normal(rng);
        cur = evaluate(x);
        continue;
      }
      Eigen::MatrixXd jac;
      try {
        jac = spectral_jacobian(topology, cur.eig, 0.0).bottomRows(nm);
      } catch (const Error&) {
        for (Eigen::Index e = 0; e < nx; ++e) x[e] += 1e-3 * normal(rng);
        cur = evaluate(x);
        continue;
      }
      for (Eigen::Index e = 0; e < nx; ++e) jac.col(e) *= std::exp(x[e]);  // chain rule for log w

      const Eigen::MatrixXd jtj = jac.transpose() * jac;
      const Eigen::VectorXd jtr = jac.transpose() * cur.residual;
      if (damping < 0.0) damping = 1e-3 * std::max(jtj.diagonal().maxCoeff(), 1e-300);

      bool accepted = false;
      for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
        Eigen::MatrixXd a = jtj;
        a.diagonal().array() += damping;
        Eigen::VectorXd step = -a.ldlt().solve(jtr);
        const double longest = step.cwiseAbs().maxCoeff();
        if (longest > 2.0) step *= 2.0 / longest;
        Eval trial = evaluate(x + step);
        if (trial.cost < cur.cost) {
          x += step;
          cur = std::move(trial);
          damping = std::max(damping * 0.3, 1e-15);
          accepted = true;
        } else {
          damping *= 4.0;
        }
      }
      if (!accepted) break;  // stuck; try another start
    }
    if (!converged) continue;

    TopologyFit fit;
    fit.weights.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) fit.weights[e] = std::exp(x[static_cast<Eigen::Index>(e)]);
    if (*std::min_element(fit.weights.begin(), fit.weights.end()) <= options.positivity_floor) {
      boundary_hit = true;
      continue;
    }
    fit.achieved = nonzero_spectrum(topology.with_weights(fit.weights));
    fit.mismatch = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
      fit.mismatch = std::max(fit.mismatch, std::abs(fit.achieved[k] - mu[k]));
    }
    if (fit.mismatch > options.tol) continue;
    fit.restarts_used = restart + 1;
    return fit;
  }

  if (boundary_hit) {
    throw Error(ErrorCode::kBoundaryFailure,
                "converged only with a weight at the positivity floor (solver deficiency)");
  }
  throw Error(ErrorCode::kNonConvergence,
              "no start met tol after " + std::to_string(options.restarts) +
                  " restarts; best mismatch " + format_double(best_mismatch));
}

WeightSolution prescribe_complete_graph(std::size_t N, double vertex_measure,
                                        std::span<const double> mu,
                                        const PrescribeOptions& options) {
  if (N < 2) throw Error(ErrorCode::kInvalidArgument, "N must be at least 2");
  if (!(vertex_measure > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "vertex measure must be positive");
  }
  if (mu.size() + 1 != N) {
    throw Error(ErrorCode::kDimensionMismatch, "need N-1 target eigenvalues");
  }
  require_strictly_increasing_positive(mu, "target spectrum");

  std::vector<Edge> pairs;
  for (NodeId u = 0; u < N; ++u) {
    for (NodeId v = u + 1; v < N; ++v) pairs.push_back({u, v, 1.0, std::nullopt});
  }
  // Constant measure nu divides the unit-measure spectrum by nu.
  std::vector<double> scaled(mu.begin(), mu.end());
  for (double& x : scaled) x *= vertex_measure;
  PrescribeOptions unit_opts = options;
  unit_opts.tol = options.tol * vertex_measure;
  const MeasuredGraph topology = MeasuredGraph::with_unit_measures(N, pairs);
  const TopologyFit fit = fit_weights_on_topology(topology, scaled, unit_opts);

  WeightSolution sol;
  sol.N = N;
  sol.vertex_measure = vertex_measure;
  sol.weights = std::vector<Edge>(topology.edges().begin(), topology.edges().end());
  for (std::size_t e = 0; e < sol.weights.size(); ++e) sol.weights[e].weight = fit.weights[e];
  sol.achieved_spectrum = nonzero_spectrum(sol.graph());
  sol.mismatch = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    sol.mismatch = std::max(sol.mismatch, std::abs(sol.achieved_spectrum[k] - mu[k]));
  }
  sol.restarts_used = fit.restarts_used;
  if (sol.mismatch > options.tol) {
    throw Error(ErrorCode::kNonConvergence,
                "rescaled solution misses tol: mismatch " + format_double(sol.mismatch));
  }
  return sol;
}

WeightSolution prescribe_complete_graph(std::size_t N, double vertex_measure,
                                        std::span<const double> mu, double tol,
                                        std::uint64_t seed) {
  PrescribeOptions o;
  o.tol = tol;
  o.seed = seed;
  return prescribe_complete_graph(N, vertex_measure, mu, o);
}

P3Weights solve_p3_closed_form(double lambda1, double lambda2) {
  if (!(lambda1 > 0.0 && lambda2 > lambda1)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < lambda1 < lambda2");
  }
  if (lambda2 < 2.0 * lambda1) {
    throw Error(ErrorCode::kInfeasible,
                "path graph P3 with areas (2pi, 4pi, 2pi) needs lambda2 >= 2 lambda1");
  }
  constexpr double pi = std::numbers::pi;
  const double sum = 4.0 * pi * (lambda1 + lambda2) / 3.0;
  // factored discriminant keeps the boundary case lambda2 = 2 lambda1 exact
  const double disc = (8.0 * pi * pi / 9.0) * (2.0 * lambda1 - lambda2) * (lambda1 - 2.0 * lambda2);
  const double root = std::sqrt(std::max(disc, 0.0));
  return {(sum + root) / 2.0, (sum - root) / 2.0};
}

MeasuredGraph p3_graph(double w12, double w23) {
  const std::vector<Edge> edges = {{0, 1, w12, std::nullopt}, {1, 2, w23, std::nullopt}};
  return MeasuredGraph(std::vector<double>(kP3Measures.begin(), kP3Measures.end()), edges);
}

}  // namespace heavynet
