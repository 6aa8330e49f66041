#pragma once

#include <Eigen/Dense>

#include <vector>

namespace mixedrom {

/// Gaussian radial basis interpolant sharing centres and shape parameter across
/// all outputs. Inputs are mapped per dimension to [0, 1] with the training
/// minimum and maximum.
struct RbfInterpolant {
  Eigen::MatrixXd centers;  // normalized, one row per centre
  Eigen::VectorXd lower;    // raw minimum per dimension
  Eigen::VectorXd span;     // raw max - min per dimension (1 where degenerate)
  Eigen::MatrixXd weights;  // centres x outputs
  double gamma = 1.0;
  double ridge = 0.0;
  double residual = 0.0;    // max |A w - Y| / max |Y| of the solved system

  int dim() const { return static_cast<int>(centers.cols()); }
  int outputs() const { return static_cast<int>(weights.cols()); }
  Eigen::VectorXd normalize(const Eigen::VectorXd& z) const;
  /// `extrapolated` is set when z lies more than 10% outside the unit box.
  Eigen::VectorXd eval(const Eigen::VectorXd& z, bool* extrapolated = nullptr) const;
};

double gaussian_kernel(double r, double gamma);

/// 1 / mean pairwise distance of normalized centres; 1 for a single centre.
double default_gamma(const Eigen::MatrixXd& normalized_centers);

/// Fits weights from raw inputs (rows) and outputs (rows aligned). gamma <= 0
/// selects default_gamma. Solves (A + ridge I) W = Y by Cholesky; throws
/// Error(Stage::Rbf) for duplicate centres at zero ridge or an indefinite system.
RbfInterpolant rbf_fit(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& outputs, double gamma, double ridge);

/// Piecewise-linear table in one variable with clamped ends.
struct LinearTable {
  std::vector<double> x;  // strictly increasing
  Eigen::MatrixXd y;      // one row per x
  Eigen::VectorXd eval(double q) const;
};

/// Sorts (x, rows of y) by x; throws on duplicate x or fewer than one row.
LinearTable fit_linear_table(const std::vector<double>& x, const Eigen::MatrixXd& y);

/// Identity table over the sample parameters: evaluates to the hat-function
/// weights of the mean viscosity fields.
LinearTable fit_mean_coefficients(const std::vector<double>& mu);

/// (S_r, mode_l) for every snapshot column r and mode l: rows snapshots, columns modes.
Eigen::MatrixXd projection_coefficients(const Eigen::MatrixXd& snapshots, const Eigen::MatrixXd& modes,
                                        const Eigen::VectorXd& weights);

/// Time-parameter inputs: [mu] per column when n_t == 1, else [mu, t - t_first].
Eigen::MatrixXd time_parameter_inputs(const std::vector<double>& mu, const std::vector<double>& times, int n_t);

/// Velocity-coefficient table: for every sample, rows 2..n_t of
/// [a^r, (a^r - a^{r-1}) / interval_k]. `coeffs` has one row per snapshot.
Eigen::MatrixXd velocity_training_inputs(const Eigen::MatrixXd& coeffs, int n_t, const std::vector<double>& interval);
/// Rows of `values` aligned with velocity_training_inputs (first instant of each sample dropped).
Eigen::MatrixXd drop_first_instants(const Eigen::MatrixXd& values, int n_t);

}  // namespace mixedrom
