#include "heavynet/eigensolvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "heavynet/errors.hpp"
#include "heavynet/laplacian.hpp"

namespace heavynet {

std::string_view to_string(SolverMethod m) {
  return m == SolverMethod::kDense ? "dense" : "iterative";
}

namespace {

void require_connected(const MeasuredGraph& g) {
  const std::size_t c = g.component_count();
  if (c > 1) {
    throw Error(ErrorCode::kDisconnected,
                "graph has " + std::to_string(c) + " connected components");
  }
}

// S = M^{-1/2} K M^{-1/2} applied matrix-free on the CSR arrays.
class SymmetrizedOperator {
 public:
  explicit SymmetrizedOperator(const MeasuredGraph& g) : g_(g) {
    const auto mu = g.measures();
    inv_sqrt_.resize(static_cast<Eigen::Index>(mu.size()));
    sqrt_mu_.resize(inv_sqrt_.size());
    diag_.resize(inv_sqrt_.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      sqrt_mu_[i] = std::sqrt(mu[i]);
      inv_sqrt_[i] = 1.0 / sqrt_mu_[i];
      diag_[i] = g.weighted_degree(i) / mu[i];
    }
    kernel_ = sqrt_mu_ / sqrt_mu_.norm();
  }

  Eigen::Index size() const { return inv_sqrt_.size(); }
  const Eigen::VectorXd& kernel() const { return kernel_; }
  const Eigen::VectorXd& diagonal() const { return diag_; }
  const Eigen::VectorXd& inv_sqrt_measure() const { return inv_sqrt_; }

  void apply(const Eigen::VectorXd& y, Eigen::VectorXd& out) const {
    const auto rp = g_.row_ptr();
    const auto ci = g_.col_idx();
    const auto aw = g_.adj_weights();
    out.resize(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double xi = y[i] * inv_sqrt_[i];
      double acc = 0.0;
      for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
        acc += aw[k] * (xi - y[ci[k]] * inv_sqrt_[ci[k]]);
      }
      out[i] = acc * inv_sqrt_[i];
    }
  }

  void deflate(Eigen::VectorXd& y) const { y -= kernel_ * kernel_.dot(y); }

 private:
  const MeasuredGraph& g_;
  Eigen::VectorXd inv_sqrt_;
  Eigen::VectorXd sqrt_mu_;
  Eigen::VectorXd diag_;
  Eigen::VectorXd kernel_;
};

// Solves S z = b on the complement of the kernel (b must be deflated).
// Returns the iteration count, or -1 on failure.
long projected_pcg(const SymmetrizedOperator& op, const Eigen::VectorXd& b,
                   Eigen::VectorXd& z, double rel_tol, std::size_t max_iter) {
  const Eigen::Index n = op.size();
  z.setZero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return 0;
  Eigen::VectorXd r = b;
  Eigen::VectorXd s(n), p(n), q(n);
  auto precondition = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    out = in.cwiseQuotient(op.diagonal());
    op.deflate(out);
  };
  precondition(r, s);
  p = s;
  double rs = r.dot(s);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    op.apply(p, q);
    const double pq = p.dot(q);
    if (!(pq > 0.0)) return -1;
    const double alpha = rs / pq;
    z.noalias() += alpha * p;
    r.noalias() -= alpha * q;
    if (r.norm() <= rel_tol * bnorm) {
      op.deflate(z);
      return static_cast<long>(it);
    }
    precondition(r, s);
    const double rs_next = r.dot(s);
    p = s + (rs_next / rs) * p;
    rs = rs_next;
  }
  return -1;
}

Eigen::VectorXd random_unit(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

void orthogonalize(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& basis,
                   const SymmetrizedOperator& op) {
  for (int pass = 0; pass < 2; ++pass) {
    op.deflate(w);
    for (const auto& v : basis) w -= v * v.dot(w);
  }
}

}  // namespace

double spectral_scale(const MeasuredGraph& g) {
  const auto mu = g.measures();
  double best = 0.0;
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    best = std::max(best, 2.0 * g.weighted_degree(i) / mu[i]);
  }
  return best > 0.0 ? best : 1.0;
}

double pair_residual(const MeasuredGraph& g, double lambda,
                     const Eigen::Ref<const Eigen::VectorXd>& f) {
  const Eigen::VectorXd lf = laplacian_apply(g, f);
  const auto mu = g.measures();
  double acc = 0.0;
  // M^{-1/2}(K f - lambda M f) = M^{1/2}(L f - lambda f)
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    const double d = lf[i] - lambda * f[i];
    acc += mu[i] * d * d;
  }
  return std::sqrt(acc);
}

EigenResult spectrum_dense(const MeasuredGraph& g, bool with_vectors, std::size_t threshold) {
  if (g.vertex_count() > threshold) {
    throw Error(ErrorCode::kThresholdExceeded,
                std::to_string(g.vertex_count()) + " vertices exceeds dense threshold " +
                    std::to_string(threshold));
  }
  require_connected(g);
  const Eigen::MatrixXd s = symmetrized_laplacian_dense(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNonConvergence, "dense symmetric eigensolver failed");
  }
  const auto n = s.rows();
  const auto mu = g.measures();
  Eigen::MatrixXd vecs = solver.eigenvectors();
  for (Eigen::Index i = 0; i < n; ++i) vecs.row(i) /= std::sqrt(mu[i]);

  EigenResult out;
  out.method = SolverMethod::kDense;
  out.eigenvalues = solver.eigenvalues();
  out.residuals.resize(n);
  const Eigen::MatrixXd r = s * solver.eigenvectors() -
                            solver.eigenvectors() * out.eigenvalues.asDiagonal();
  for (Eigen::Index k = 0; k < n; ++k) out.residuals[k] = r.col(k).norm();
  if (with_vectors) out.eigenvectors = std::move(vecs);
  return out;
}

EigenResult spectrum_smallest_k(const MeasuredGraph& g, std::size_t k,
                                const IterativeOptions& options) {
  const std::size_t n = g.vertex_count();
  if (k == 0 || k >= n) {
    throw Error(ErrorCode::kInvalidArgument,
                "k must satisfy 1 <= k < vertex_count, got k=" + std::to_string(k));
  }
  require_connected(g);

  const SymmetrizedOperator op(g);
  const auto nn = static_cast<Eigen::Index>(n);
  const double scale = spectral_scale(g);

  EigenResult out;
  out.method = SolverMethod::kIterative;
  out.eigenvalues.resize(static_cast<Eigen::Index>(k));
  out.residuals.resize(static_cast<Eigen::Index>(k));
  Eigen::MatrixXd vecs(nn, static_cast<Eigen::Index>(k));
  out.eigenvalues[0] = 0.0;
  vecs.col(0).setConstant(1.0 / std::sqrt(g.total_measure()));
  out.residuals[0] = pair_residual(g, 0.0, vecs.col(0));
  if (k == 1) {
    out.eigenvectors = std::move(vecs);
    return out;
  }

  const std::size_t wanted = k - 1;
  const std::size_t dim = n - 1;
  const std::size_t cap = std::min(dim, std::max(options.max_basis, wanted + 2));
  const std::size_t min_steps = std::min(dim, 2 * wanted + 8);

  std::mt19937_64 rng(options.seed);
  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis[j] and basis[j+1]

  Eigen::VectorXd v = random_unit(rng, nn);
  orthogonalize(v, basis, op);
  v.normalize();

  Eigen::VectorXd w(nn), z(nn), sy(nn);
  std::vector<double> last_residuals(wanted, std::numeric_limits<double>::infinity());
  double alpha_scale = 0.0;

  auto fail = [&](const std::string& why) {
    std::ostringstream msg;
    msg << why << "; residuals:";
    for (double r : last_residuals) msg << ' ' << r;
    throw Error(ErrorCode::kNonConvergence, msg.str());
  };

  for (std::size_t j = 0; j < cap; ++j) {
    basis.push_back(v);
    if (projected_pcg(op, v, z, options.cg_rel_tol, options.max_cg_iterations) < 0) {
      fail("inner conjugate-gradient solve did not converge");
    }
    w = z;
    const double a = v.dot(w);
    alpha.push_back(a);
    alpha_scale = std::max(alpha_scale, std::abs(a));
    orthogonalize(w, basis, op);
    const double b = w.norm();

    const std::size_t m = basis.size();
    const bool exhausted = (m == dim);
    const bool check = m >= wanted && (m >= min_steps) && (m % 4 == 0 || exhausted || m == cap);
    if (check) {
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(m));
      Eigen::VectorXd sub(static_cast<Eigen::Index>(m > 1 ? m - 1 : 1));
      for (std::size_t i = 0; i + 1 < m; ++i) sub[static_cast<Eigen::Index>(i)] = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      if (m == 1) {
        tri.compute(Eigen::MatrixXd::Constant(1, 1, alpha[0]));
      } else {
        tri.computeFromTridiagonal(diag, sub.head(static_cast<Eigen::Index>(m - 1)),
                                   Eigen::ComputeEigenvectors);
      }
      const Eigen::VectorXd& theta = tri.eigenvalues();
      const Eigen::MatrixXd& s = tri.eigenvectors();
      // cheap estimate first: ||S y - nu y|| <= nu * scale * |b * s_last|
      bool estimate_ok = true;
      for (std::size_t r = 0; r < wanted; ++r) {
        const Eigen::Index col = static_cast<Eigen::Index>(m - 1 - r);
        if (!(theta[col] > 0.0)) {
          estimate_ok = false;
          break;
        }
        const double est = (1.0 / theta[col]) * scale * std::abs(b * s(static_cast<Eigen::Index>(m - 1), col));
        if (!exhausted && est > options.tol) estimate_ok = false;
      }
      if (estimate_ok) {
        bool all_ok = true;
        for (std::size_t r = 0; r < wanted; ++r) {
          const Eigen::Index col = static_cast<Eigen::Index>(m - 1 - r);
          Eigen::VectorXd y = Eigen::VectorXd::Zero(nn);
          for (std::size_t i = 0; i < m; ++i) y += s(static_cast<Eigen::Index>(i), col) * basis[i];
          op.deflate(y);
          y.normalize();
          const double nu = 1.0 / theta[col];
          op.apply(y, sy);
          const double res = (sy - nu * y).norm();
          last_residuals[r] = res;
          if (res > options.tol) all_ok = false;
          const auto slot = static_cast<Eigen::Index>(r + 1);
          out.eigenvalues[slot] = nu;
          out.residuals[slot] = res;
          vecs.col(slot) = y.cwiseProduct(op.inv_sqrt_measure());
        }
        if (all_ok) {
          out.eigenvectors = std::move(vecs);
          return out;
        }
      }
    }
    if (exhausted) break;

    if (b <= 1e-12 * std::max(alpha_scale, 1e-300)) {
      // invariant subspace found; continue from a fresh direction
      v = random_unit(rng, nn);
      orthogonalize(v, basis, op);
      v.normalize();
      beta.push_back(0.0);
    } else {
      v = w / b;
      beta.push_back(b);
    }
  }
  fail("Lanczos basis budget of " + std::to_string(cap) + " vectors exhausted");
  return out;  // unreachable
}

EigenResult spectrum_smallest_k(const MeasuredGraph& g, std::size_t k, double tol,
                                std::uint64_t seed) {
  IterativeOptions o;
  o.tol = tol;
  o.seed = seed;
  return spectrum_smallest_k(g, k, o);
}

EigenResult spectrum_smallest_auto(const MeasuredGraph& g, std::size_t k,
                                   const IterativeOptions& options, std::size_t threshold) {
  if (g.vertex_count() <= threshold) {
    EigenResult full = spectrum_dense(g, true, threshold);
    const auto kk = static_cast<Eigen::Index>(std::min<std::size_t>(k, g.vertex_count()));
    full.eigenvalues.conservativeResize(kk);
    full.residuals.conservativeResize(kk);
    full.eigenvectors->conservativeResize(Eigen::NoChange, kk);
    return full;
  }
  return spectrum_smallest_k(g, k, options);
}

void measure_orthonormalize(const MeasuredGraph& g, Eigen::MatrixXd& vectors) {
  const auto mu = g.measures();
  Eigen::VectorXd w(vectors.rows());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = mu[i];
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
      for (Eigen::Index p = 0; p < c; ++p) {
        const double proj = (vectors.col(p).cwiseProduct(w)).dot(vectors.col(c));
        vectors.col(c) -= proj * vectors.col(p);
      }
      const double nrm = std::sqrt((vectors.col(c).cwiseProduct(w)).dot(vectors.col(c)));
      if (nrm > 0.0) vectors.col(c) /= nrm;
    }
  }
}

}  // namespace heavynet
