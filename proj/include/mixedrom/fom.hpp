#pragma once

#include "mixedrom/archive.hpp"
#include "mixedrom/config.hpp"
#include "mixedrom/operators.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace mixedrom {

struct FomConfig {
  Geometry geometry;
  double nu = 0.01;
  std::vector<double> mu;
  /// Solver step; 0 selects a per-sample step from the stability limits.
  double dt = 0.0;
  double cfl_target = 0.5;
  /// Expected max |u| / mu, used by the automatic step.
  double velocity_scale = 2.0;
  double spinup = 0.0;
  int n_t = 1;
  int save_every = 1;
  /// With n_t == 1: stop the spin-up once max|u^{n+1} - u^n| / dt falls below this (0 disables).
  double steady_tol = 0.0;
  double cs = 0.17;
  /// Filter width; 0 means sqrt(dx dy).
  double delta_les = 0.0;
  bool eddy_viscosity = true;
  ConvectionScheme convection = ConvectionScheme::Central;
  /// After spin-up, advance to an upward zero crossing of the lift coefficient
  /// before saving, so every sample's window starts at the same phase.
  bool phase_align = false;
  double max_align_time = 50.0;
  double rho = 1.0;
};

FomConfig fom_config(const Config& config);

struct FomState {
  VectorField u;
  ScalarField p;
  ScalarField nut;
  double t = 0.0;
};

/// Smagorinsky-type eddy viscosity (cs * delta)^2 sqrt(2 S:S); trace copied from the adjacent cell.
ScalarField eddy_viscosity_field(const VectorField& u, const StructuredGrid& grid, double cs, double delta);

/// Momentum right-hand side without the pressure gradient:
/// -div(u u) + nu lap(u) + nu div(grad u^T) + nut * lap(u) + div(nut grad u^T).
VectorField momentum_rhs(const VectorField& u, const ScalarField& nut, double nu, const StructuredGrid& grid,
                         ConvectionScheme scheme);

/// Per-sample automatic step: min of convective, diffusive and central-scheme limits.
double auto_time_step(const StructuredGrid& grid, const FomConfig& config, double mu);

/// Chorin projection solver for one parameter value.
class FomSolver {
public:
  FomSolver(const StructuredGrid& grid, const BoundarySetup& bcs, const FomConfig& config, double mu, double dt);

  /// Fluid at rest with the boundary values of mu applied.
  FomState initial_state() const;
  /// One explicit predictor step plus exact discrete projection.
  void step(FomState& state) const;
  /// Projects an arbitrary velocity onto the discretely divergence-free space.
  void project(VectorField& u, ScalarField* p_out = nullptr) const;

  double mu() const { return mu_; }
  double dt() const { return dt_; }
  double cfl(const VectorField& u) const;
  /// max |div u| scaled by L_ref / U_ref, U_ref = max(|mu|, max cell speed component).
  double relative_divergence(const VectorField& u) const;
  /// Force exerted by the fluid on the force patch (the body): integral of (p n - 2 rho nu du/dn)
  /// with the fluid-outward grid normals.
  Vec2 force(const FomState& state) const;
  double lift_coefficient(const FomState& state) const;
  double kinetic_energy(const VectorField& u) const;

private:
  ScalarField pressure_operator(const ScalarField& p) const;
  void assemble_pressure_matrix();

  const StructuredGrid& grid_;
  BoundarySetup bcs_;
  FomConfig config_;
  double mu_;
  double dt_;
  double delta_;
  double u_ref_;
  double l_ref_;
  int pinned_ = -1;
  ScalarField affine_;  // pressure operator applied to p = 0
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

/// Runs every sample: spin-up, optional phase alignment, then n_t saved
/// instants every save_every steps. `on_save(sample, instant, state)` is
/// called for every saved instant when provided.
using SaveHook = std::function<void(int, int, const FomState&)>;
SnapshotArchive generate_snapshots(const FomConfig& config, const Config& raw, const SaveHook& on_save = {});

}  // namespace mixedrom
