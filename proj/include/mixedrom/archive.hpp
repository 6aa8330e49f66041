#pragma once

#include "mixedrom/config.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mixedrom {

/// Snapshot campaign. Columns are grouped by sample, then by time:
/// column r = k * n_t + l holds instant l of sample k.
struct SnapshotArchive {
  Eigen::MatrixXd u;    // packed vector fields
  Eigen::MatrixXd p;    // packed scalar fields
  Eigen::MatrixXd nut;  // packed scalar fields
  int n_t = 0;
  std::vector<double> mu;        // per sample
  std::vector<double> dt;        // solver step per sample
  std::vector<double> interval;  // time between saved instants per sample
  std::vector<double> times;     // per column
  /// Optional lift history per sample: column 2k = time, 2k+1 = lift coefficient.
  Eigen::MatrixXd lift;
  /// Geometry and solver keys of the generating run.
  Config config;

  int num_samples() const { return static_cast<int>(mu.size()); }
  int num_snapshots() const { return static_cast<int>(u.cols()); }
  int sample_of(int column) const { return column / n_t; }
};

/// Directory layout: u.romf, p.romf, nut.romf, lift.romf, meta.txt.
void write_archive(const std::string& dir, const SnapshotArchive& archive);
SnapshotArchive read_archive(const std::string& dir);

}  // namespace mixedrom
