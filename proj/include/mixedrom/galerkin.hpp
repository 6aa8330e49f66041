#pragma once

#include "mixedrom/grid.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mixedrom {

/// Packed basis columns. The velocity block is ordered
/// [n_u POD modes | n_s supremizers | n_lift lifting functions] and the
/// pressure block [n_p POD modes | n_pc pressure lifting]. Lifting columns act
/// as frozen modes whose coefficients are the boundary values.
struct ReducedBasis {
  Eigen::MatrixXd velocity;
  Eigen::MatrixXd pressure;
  Eigen::MatrixXd viscosity;       // fluctuation (or plain) viscosity modes
  Eigen::MatrixXd mean_viscosity;  // one column per training sample; may be empty
  int n_u = 0, n_s = 0, n_lift = 0;
  int n_p = 0, n_pc = 0;

  int n_velocity() const { return n_u + n_s + n_lift; }
  int n_pressure() const { return n_p + n_pc; }
};

/// A third-order operator stored as one matrix per test function:
/// entry (i, j, k) is slices[i](j, k).
using Tensor3 = std::vector<Eigen::MatrixXd>;

/// Reduced operators over the full basis (test and trial indices both run over
/// every velocity column, lifting included).
struct ReducedOperators {
  Eigen::MatrixXd M, B, BT, H, P;
  Tensor3 C;               // (phi_i, div(phi_j (x) phi_k))
  Tensor3 CT1, CT2;        // (phi_i, eta_j lap phi_k), (phi_i, div(eta_j grad phi_k^T))
  Tensor3 CT1_mean, CT2_mean;
  Eigen::MatrixXd D;       // column l: integral of component c_l of phi_i over patch p_l
  Tensor3 E;               // slice l: integral of phi_i,c_l phi_j,c_l over patch p_l
  Eigen::MatrixXd delta;   // n_velocity x 2
  Eigen::MatrixXd theta;   // n_pressure x 2
};

struct ForceOptions {
  std::string patch;  // empty: no force operators
  double mu_dyn = 1.0;
  bool symmetric_strain = false;
};

void assemble_linear(const ReducedBasis& basis, const StructuredGrid& grid, ReducedOperators& ops);
void assemble_convection(const ReducedBasis& basis, const StructuredGrid& grid, ReducedOperators& ops);
void assemble_turbulence(const ReducedBasis& basis, const StructuredGrid& grid, ReducedOperators& ops);
/// One D column and E slice per scalar boundary condition of `bcs`.
void assemble_penalty(const ReducedBasis& basis, const StructuredGrid& grid, const BoundarySetup& bcs,
                      ReducedOperators& ops);
void assemble_forces(const ReducedBasis& basis, const StructuredGrid& grid, const ForceOptions& options,
                     ReducedOperators& ops);

/// Direct surface force of packed fields on a patch, (2 mu du/dn - p n) per unit depth.
Eigen::Vector2d surface_force(const Eigen::VectorXd& u, const Eigen::VectorXd& p, const StructuredGrid& grid,
                              const ForceOptions& options);

/// Smallest eigenvalue of M; throws Error(Stage::Galerkin) unless positive.
double check_mass_matrix(const Eigen::MatrixXd& m);

}  // namespace mixedrom
