#pragma once

#include "mixedrom/grid.hpp"
#include "mixedrom/linalg.hpp"

#include <Eigen/Dense>

namespace mixedrom {

/// C = S^T W S with W the diagonal volume weights of the packed layout.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& snapshots, const Eigen::VectorXd& weights);

/// Jacobi eigendecomposition with round-off negatives clipped to zero.
SymmetricEigen eigendecompose(const Eigen::MatrixXd& c);

/// Number of eigenvalues above 1e-12 * lambda_1.
int numerical_rank(const Eigen::VectorXd& eigenvalues);

/// Modes sum_j S_j V_ji, normalized to unit weighted norm and
/// re-orthogonalized. Throws when n_keep exceeds the numerical rank.
Eigen::MatrixXd compute_modes(const Eigen::MatrixXd& snapshots, const Eigen::VectorXd& weights,
                              const SymmetricEigen& eig, int n_keep);

/// Orthonormal basis of the whole snapshot span: every eigenvector combination
/// in order, weighted Gram-Schmidt, columns that vanish against their
/// predecessors dropped. Unlike compute_modes it ignores the rank cutoff, so
/// projections onto it reproduce every snapshot.
Eigen::MatrixXd snapshot_span_basis(const Eigen::MatrixXd& snapshots, const Eigen::VectorXd& weights,
                                    const SymmetricEigen& eig);

/// Running fraction of total eigenvalue mass; nondecreasing, ends at 1.
Eigen::VectorXd cumulative_energy(const Eigen::VectorXd& eigenvalues);

struct PodResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd modes;
  int rank = 0;
};

/// Full pipeline; keeps min(max_modes, rank) modes.
PodResult pod(const Eigen::MatrixXd& snapshots, const Eigen::VectorXd& weights, int max_modes);

/// Velocity enrichment from pressure modes: s = +-grad(chi) / ||grad(chi)|| with
/// homogeneous velocity traces, sign chosen so (chi, div s) > 0.
Eigen::MatrixXd supremizer_modes(const Eigen::MatrixXd& pressure_modes, const StructuredGrid& grid,
                                 const BoundarySetup& bcs);

struct LiftingFunctions {
  /// One packed vector field per scalar boundary condition, in scalar_bcs() order.
  Eigen::MatrixXd velocity;
  /// Packed scalar field equal to 1 on pressure-Dirichlet patches; zero when there are none.
  Eigen::VectorXd pressure;
};

/// Discrete Laplace solves: for each parametrized Dirichlet patch j, value 1 on
/// j, 0 on the other velocity-Dirichlet patches, zero gradient elsewhere.
LiftingFunctions build_lifting_functions(const StructuredGrid& grid, const BoundarySetup& bcs);

struct Homogenized {
  Eigen::MatrixXd u;
  Eigen::MatrixXd p;
};

/// u~ = u - phi_L U_BC and p~ = p - p_out chi_c, column by column.
/// u_bc is N_BC x N_s, p_out has N_s entries.
Homogenized homogenize(const Eigen::MatrixXd& u, const Eigen::MatrixXd& p, const LiftingFunctions& lifting,
                       const Eigen::MatrixXd& u_bc, const Eigen::VectorXd& p_out);

struct MeanViscosity {
  Eigen::MatrixXd means;         // one column per sample
  Eigen::MatrixXd fluctuations;  // same shape as the input
};

/// Per-sample time means of viscosity snapshots grouped as n_t columns per sample.
MeanViscosity mean_viscosity_fields(const Eigen::MatrixXd& nut, int n_t);

}  // namespace mixedrom
