#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "heavynet/measured_graph.hpp"

namespace heavynet {

// (L f)(i) = (1 / nu_i) * sum_j w_ij (f(i) - f(j)).
Eigen::VectorXd laplacian_apply(const MeasuredGraph& g,
                                const Eigen::Ref<const Eigen::VectorXd>& f);

// sum_e w_e (f_u - f_v)^2, which equals <f, L f> in the measure inner product.
double dirichlet_energy(const MeasuredGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f);

// sum_i nu_i f_i h_i
double measure_inner(const MeasuredGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f,
                     const Eigen::Ref<const Eigen::VectorXd>& h);

// Edge stiffness matrix K (weighted degree on the diagonal, -w off it), so
// that f^T K f is the Dirichlet energy.
Eigen::SparseMatrix<double> stiffness_matrix(const MeasuredGraph& g);

// M^{-1/2} K M^{-1/2}: symmetric, with the same spectrum as L.
Eigen::SparseMatrix<double> symmetrized_laplacian(const MeasuredGraph& g);
Eigen::MatrixXd symmetrized_laplacian_dense(const MeasuredGraph& g);

}  // namespace heavynet
