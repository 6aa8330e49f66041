#pragma once

#include <Eigen/Dense>

#include <vector>

namespace mixedrom {

/// 100 * ||ref - approx||_W / ||ref||_W with diagonal weights W.
double relative_error(const Eigen::VectorXd& reference, const Eigen::VectorXd& approx, const Eigen::VectorXd& weights);

/// sum_i a_i delta_i - sum_j b_j theta_j.
Eigen::Vector2d reduced_force(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::MatrixXd& delta,
                              const Eigen::MatrixXd& theta);

/// lift / (0.5 rho U^2 D).
double lift_coefficient(double lift, double rho, double u, double d);

struct LiftSignal {
  std::vector<double> t;   // strictly increasing
  std::vector<double> cl;
};

/// 100 * ||rom - ref||_{L2(T1,T2)} / ||ref||_{L2(T1,T2)}, trapezoid rule on the
/// reference instants inside [T1, T2]; rom is linearly interpolated.
double lift_curve_error(const LiftSignal& ref, const LiftSignal& rom, double t1, double t2);

struct Peak {
  double t = 0.0;
  double value = 0.0;
};

/// Local maxima inside [t1, t2] by the three-point test, refined by a parabola
/// through the neighbours. Throws Error(Stage::Postproc) with fewer than two peaks.
std::vector<Peak> find_peaks(const LiftSignal& s, double t1, double t2);
double mean_period(const std::vector<Peak>& peaks);

struct PeakComparison {
  std::vector<Peak> ref, rom;
  std::vector<double> errors;  // 100 (PK_ref - PK_rom) / PK_ref, pairwise in order
  double ref_period = 0.0, rom_period = 0.0;
};

PeakComparison peak_and_period(const LiftSignal& ref, const LiftSignal& rom, double t1, double t2);

/// Dominant period from the FFT of the signal resampled on n uniform nodes over
/// [t1, t2] (mean removed); the spectral peak is refined by a parabola.
double fft_period(const LiftSignal& s, double t1, double t2, int n = 1024);

}  // namespace mixedrom
