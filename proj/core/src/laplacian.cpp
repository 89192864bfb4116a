#include "heavynet/laplacian.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "heavynet/errors.hpp"

namespace heavynet {

namespace {

void check_length(const MeasuredGraph& g, Eigen::Index len) {
  if (static_cast<std::size_t>(len) != g.vertex_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector of length " + std::to_string(len) + " for graph with " +
                    std::to_string(g.vertex_count()) + " vertices");
  }
}

}  // namespace

Eigen::VectorXd laplacian_apply(const MeasuredGraph& g,
                                const Eigen::Ref<const Eigen::VectorXd>& f) {
  check_length(g, f.size());
  const auto rp = g.row_ptr();
  const auto ci = g.col_idx();
  const auto aw = g.adj_weights();
  const auto mu = g.measures();
  Eigen::VectorXd out(f.size());
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    double acc = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) acc += aw[k] * (f[i] - f[ci[k]]);
    out[i] = acc / mu[i];
  }
  return out;
}

double dirichlet_energy(const MeasuredGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f) {
  check_length(g, f.size());
  double acc = 0.0;
  for (const Edge& e : g.edges()) {
    const double d = f[e.u] - f[e.v];
    acc += e.weight * d * d;
  }
  return acc;
}

double measure_inner(const MeasuredGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f,
                     const Eigen::Ref<const Eigen::VectorXd>& h) {
  check_length(g, f.size());
  check_length(g, h.size());
  const auto mu = g.measures();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.vertex_count(); ++i) acc += mu[i] * f[i] * h[i];
  return acc;
}

Eigen::SparseMatrix<double> stiffness_matrix(const MeasuredGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * g.edge_count() + g.vertex_count());
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    t.emplace_back(u, u, e.weight);
    t.emplace_back(v, v, e.weight);
    t.emplace_back(u, v, -e.weight);
    t.emplace_back(v, u, -e.weight);
  }
  Eigen::SparseMatrix<double> k(n, n);
  k.setFromTriplets(t.begin(), t.end());
  return k;
}

Eigen::SparseMatrix<double> symmetrized_laplacian(const MeasuredGraph& g) {
  Eigen::SparseMatrix<double> k = stiffness_matrix(g);
  Eigen::VectorXd s(k.rows());
  const auto mu = g.measures();
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = 1.0 / std::sqrt(mu[i]);
  for (Eigen::Index col = 0; col < k.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, col); it; ++it) {
      it.valueRef() *= s[it.row()] * s[it.col()];
    }
  }
  return k;
}

Eigen::MatrixXd symmetrized_laplacian_dense(const MeasuredGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  const auto mu = g.measures();
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    s(u, u) += e.weight / mu[e.u];
    s(v, v) += e.weight / mu[e.v];
    const double off = -e.weight / std::sqrt(mu[e.u] * mu[e.v]);
    s(u, v) += off;
    s(v, u) += off;
  }
  return s;
}

}  // namespace heavynet
