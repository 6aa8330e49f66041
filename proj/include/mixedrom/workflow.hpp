#pragma once

#include "mixedrom/archive.hpp"
#include "mixedrom/config.hpp"
#include "mixedrom/model.hpp"
#include "mixedrom/postproc.hpp"
#include "mixedrom/rom_solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mixedrom {

/// FOM campaign; writes the archive to `archive` when that key is set.
SnapshotArchive run_generate(const Config& config, std::ostream& log);

/// Offline stage from `archive` (or a fresh campaign with generate = 1) into
/// `model`. A partially written model directory is removed on failure.
Model run_offline(const Config& config, std::ostream& log);

struct QueryOptions {
  double mu = 0.0;
  bool steady = true;
  RomOptions rom;  // rom.t_final: unsteady horizon, measured from the first saved instant
};

struct QueryResult {
  double mu = 0.0;
  bool steady = true;
  bool outside_training_range = false;
  Trajectory trajectory;
  /// Reference comparison (empty without a reference sample).
  std::vector<double> ref_times, eps_u, eps_p;
  double mean_eps_u = 0.0, mean_eps_p = 0.0;
  LiftSignal lift, ref_lift;
  /// Relative L2 mismatch between the reconstructed and prescribed velocity
  /// traces on parametrized Dirichlet patches, final state.
  double inlet_mismatch = 0.0;
};

/// One online query on sliced operators. `reference` is an archive holding a
/// sample at the query parameter, or null.
QueryResult run_query(const Model& model, const OnlineSetup& setup, const QueryOptions& options,
                      const SnapshotArchive* reference);

/// Query options from config keys mu_star, steady, t_final, rom_dt, tau, newton_tol, max_iter.
QueryOptions query_options(const Model& model, const Config& config);

/// Online stage: loads `model`, runs the query and writes coefficients.csv,
/// errors.csv (with `reference`), lift.csv (with a force patch) and
/// summary.txt into `output` when set.
QueryResult run_online(const Config& config, std::ostream& log);

struct TauRow {
  double tau = 0.0;
  double inlet_mismatch = 0.0;
  double eps_u = 0.0, eps_p = 0.0;
};

/// Steady penalty solves at mu_star for every tau in `taus`.
std::vector<TauRow> run_tau_sweep(const Config& config, std::ostream& log);

struct ModeRow {
  int modes = 0;
  double mean_eps_u = 0.0, mean_eps_p = 0.0;
  std::vector<double> eps_u, eps_p;  // per held-out sample
};

/// Mean held-out errors for n_u = n_s = n_p = n_nut = N, N over `modes`,
/// against every sample of the `reference` archive.
std::vector<ModeRow> run_mode_sweep(const Config& config, std::ostream& log);

}  // namespace mixedrom
