#pragma once

#include "mixedrom/archive.hpp"
#include "mixedrom/config.hpp"
#include "mixedrom/galerkin.hpp"
#include "mixedrom/rbf.hpp"
#include "mixedrom/rom_solver.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace mixedrom {

/// Everything the offline stage produces. Operators and bases are stored at the
/// maximum ranks; online queries slice them.
struct Model {
  Config config;  // geometry, solver and training keys (no output paths)
  BcMode bc_mode = BcMode::Penalty;
  GMode g_mode = GMode::TimeParameter;
  bool split = false;

  ReducedBasis basis;
  ReducedOperators ops;
  Eigen::VectorXd eig_u, eig_p, eig_nut;
  int rank_u = 0, rank_p = 0, rank_nut = 0;

  std::vector<double> mu, dt, interval, times;
  int n_t = 0;
  /// Per snapshot (rows): inner products with [POD velocity | supremizer]
  /// modes, with pressure modes, and viscosity coefficients.
  Eigen::MatrixXd coeff_u, coeff_p, coeff_nut;
  /// Viscosity training table and interpolant at full rank.
  Eigen::MatrixXd rbf_inputs, rbf_outputs;
  RbfInterpolant rbf;
  std::string gamma_setting = "auto";
  double ridge = 1e-10;

  int num_samples() const { return static_cast<int>(mu.size()); }
};

/// Offline stage: POD, supremizers, lifting, Galerkin operators and the
/// viscosity coefficient interpolants. Training options come from `options`,
/// geometry and solver keys from the archive.
Model build_model(const SnapshotArchive& archive, const Config& options);

/// Writes all files and model.txt (ranks, keys, crc32 and shape per file).
void write_model(const std::string& dir, const Model& model);
/// Verifies checksums and shapes against the manifest.
Model load_model(const std::string& dir);
/// Manifest-declared file names.
std::vector<std::string> model_files(const std::string& dir);

/// Prints rank, eigenvalue, cumulative energy and ignored energy per mode.
void print_eigen_table(std::ostream& os, const Model& model, int rows = 20);

struct ModeCounts {
  int n_u = -1, n_s = -1, n_p = -1, n_nut = -1;  // -1: stored maximum
};

/// Operators and tables sliced for one online configuration.
struct OnlineSetup {
  ModeCounts counts;
  ReducedSystem system;
  ReducedBasis basis;
  ViscosityModel viscosity;
  /// mu -> [a (n); b (n_p); g (n_nut)] projection coefficients of each sample's first instant.
  LinearTable initial;
  /// Same coefficients for every training snapshot (rows), used for nearest-sample guesses.
  Eigen::MatrixXd snapshot_coeffs;
};

/// Throws Error(Stage::Config) naming the offending count when it exceeds the stored rank.
OnlineSetup prepare_online(const Model& model, ModeCounts counts, double rom_dt);

ModeCounts mode_counts(const Config& config);

}  // namespace mixedrom
