#pragma once

#include "mixedrom/galerkin.hpp"
#include "mixedrom/rbf.hpp"

#include <Eigen/Dense>

#include <deque>
#include <functional>
#include <vector>

namespace mixedrom {

enum class BcMode { Penalty, Lifting };
enum class GMode { TimeParameter, VelocityCoefficient };

/// Operators sliced to the requested mode counts. Unknowns are the n velocity
/// coefficients (n_u POD modes then supremizers) and the n_p pressure
/// coefficients; n_lift velocity and n_pc pressure columns are frozen at the
/// boundary values.
struct ReducedSystem {
  int n_u = 0, n_s = 0, n_lift = 0;
  int n_p = 0, n_pc = 0;
  int n_nut = 0, n_mean = 0;
  double nu = 0.0;
  Eigen::MatrixXd M, B, BT;  // n x (n + n_lift)
  Eigen::MatrixXd H;         // n x (n_p + n_pc)
  Eigen::MatrixXd P;         // n_p x (n + n_lift)
  Tensor3 C;                 // n slices of (n + n_lift)^2
  Tensor3 CT;                // n slices of n_nut x (n + n_lift): CT1 + CT2
  Tensor3 CT_mean;           // n slices of n_mean x (n + n_lift)
  Eigen::MatrixXd D;         // n x N_BC (penalty only)
  Tensor3 E;                 // N_BC slices of n x n (penalty only)
  Eigen::MatrixXd delta;     // (n + n_lift) x 2
  Eigen::MatrixXd theta;     // (n_p + n_pc) x 2

  int n() const { return n_u + n_s; }
  bool penalty() const { return !E.empty(); }
};

/// Eddy-viscosity coefficient source.
struct ViscosityModel {
  GMode mode = GMode::TimeParameter;
  RbfInterpolant rbf;      // outputs: n_nut coefficients
  bool split = false;
  LinearTable mean;        // mu -> mean-field weights (split mode)
  int n_u = 0;             // number of velocity-coefficient inputs
  /// n_u x n map from unknown velocity coefficients to POD projections
  /// (rows of the mass matrix); empty means the first n_u coefficients.
  Eigen::MatrixXd input_map;
  int lag = 1;             // backward-difference lag in steps
  bool has_rbf() const { return rbf.weights.size() > 0; }
};

struct RomOptions {
  double tau = 1e4;
  double dt = 0.0;
  double t_final = 0.0;
  double tol = 1e-10;
  int max_iter = 50;
};

struct RomState {
  Eigen::VectorXd a;     // n
  Eigen::VectorXd b;     // n_p
  Eigen::VectorXd g;     // n_nut
  Eigen::VectorXd gbar;  // n_mean
  double t = 0.0;
  double mu = 0.0;
};

/// Boundary data of one online query.
struct BoundaryData {
  Eigen::VectorXd u_bc;  // N_BC
  double p_out = 0.0;
};

/// Velocity coefficients including the frozen lifting block.
Eigen::VectorXd full_velocity(const ReducedSystem& s, const Eigen::VectorXd& a, const BoundaryData& bd);
Eigen::VectorXd full_pressure(const ReducedSystem& s, const Eigen::VectorXd& b, const BoundaryData& bd);

/// Velocity-coefficient interpolant inputs for coefficients a.
Eigen::VectorXd velocity_inputs(const ViscosityModel& vm, const Eigen::VectorXd& a);

/// Coefficients g (and gbar in split mode). `history` holds past
/// velocity_inputs vectors, most recent last; the derivative uses lag steps back
/// (or the oldest available entry, zero with no history).
void evaluate_viscosity_coeffs(RomState& state, const std::deque<Eigen::VectorXd>& history, double dt,
                               const ViscosityModel& vm);

/// Momentum forcing F(a, b) at fixed g, gbar (penalty term included when assembled).
Eigen::VectorXd momentum_forcing(const ReducedSystem& s, const RomState& state, const BoundaryData& bd, double tau);

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
  double reference = 0.0;
};

/// Implicit Euler step from `state` to t + dt. `history` as in
/// evaluate_viscosity_coeffs; g is re-evaluated at every iterate but kept out
/// of the Jacobian.
RomState unsteady_step(const ReducedSystem& s, const ViscosityModel& vm, const RomState& state,
                       const std::deque<Eigen::VectorXd>& history, const BoundaryData& bd, const RomOptions& o,
                       NewtonReport* report = nullptr);

/// Steady algebraic system (momentum rows + P a = 0) by Newton from `guess`.
RomState steady_solve(const ReducedSystem& s, const ViscosityModel& vm, const RomState& guess, const BoundaryData& bd,
                      const RomOptions& o, NewtonReport* report = nullptr);

struct Trajectory {
  std::vector<RomState> states;    // including the initial state
  std::vector<double> divergence;  // ||P a|| / ||a|| per state
};

using StepCallback = std::function<void(const RomState&)>;

/// Marches from `initial` until t_final with step dt.
Trajectory run_unsteady(const ReducedSystem& s, const ViscosityModel& vm, const RomState& initial,
                        const BoundaryData& bd, const RomOptions& o);

/// Linear interpolation in mu of per-sample coefficient rows (clamped).
Eigen::VectorXd initial_condition(double mu, const LinearTable& table);

struct ReconstructedFields {
  Eigen::VectorXd u, p, nut;  // packed
};

ReconstructedFields reconstruct_fields(const ReducedSystem& s, const ReducedBasis& basis, const RomState& state,
                                       const BoundaryData& bd);

}  // namespace mixedrom
