#include "mixedrom/postproc.hpp"

#include "mixedrom/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

namespace mixedrom {

double relative_error(const Eigen::VectorXd& ref, const Eigen::VectorXd& approx, const Eigen::VectorXd& w) {
  if (ref.size() != approx.size() || ref.size() != w.size()) throw Error(Stage::Postproc, "field size mismatch");
  const double den = std::sqrt(ref.dot(w.asDiagonal() * ref));
  if (!(den > 0)) throw Error(Stage::Postproc, "reference field has zero norm");
  const Eigen::VectorXd d = ref - approx;
  return 100.0 * std::sqrt(d.dot(w.asDiagonal() * d)) / den;
}

Eigen::Vector2d reduced_force(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::MatrixXd& delta,
                              const Eigen::MatrixXd& theta) {
  if (a.size() != delta.rows() || b.size() != theta.rows() || delta.cols() != 2 || theta.cols() != 2)
    throw Error(Stage::Postproc, "force operator size mismatch");
  return delta.transpose() * a - theta.transpose() * b;
}

double lift_coefficient(double lift, double rho, double u, double d) { return lift / (0.5 * rho * u * u * d); }

namespace {

void check_signal(const LiftSignal& s) {
  if (s.t.size() != s.cl.size() || s.t.empty()) throw Error(Stage::Postproc, "malformed lift signal");
  for (size_t k = 1; k < s.t.size(); ++k)
    if (!(s.t[k] > s.t[k - 1])) throw Error(Stage::Postproc, "lift signal times must be strictly increasing");
}

double interpolate(const LiftSignal& s, double t) {
  if (t <= s.t.front()) return s.cl.front();
  if (t >= s.t.back()) return s.cl.back();
  const auto it = std::upper_bound(s.t.begin(), s.t.end(), t);
  const size_t hi = static_cast<size_t>(it - s.t.begin());
  const size_t lo = hi - 1;
  const double w = (t - s.t[lo]) / (s.t[hi] - s.t[lo]);
  return (1.0 - w) * s.cl[lo] + w * s.cl[hi];
}

}  // namespace

double lift_curve_error(const LiftSignal& ref, const LiftSignal& rom, double t1, double t2) {
  check_signal(ref);
  check_signal(rom);
  const double lo = std::max({t1, ref.t.front(), rom.t.front()});
  const double hi = std::min({t2, ref.t.back(), rom.t.back()});
  std::vector<double> ts;
  for (double t : ref.t)
    if (t >= lo && t <= hi) ts.push_back(t);
  if (!(hi > lo) || ts.size() < 2) throw Error(Stage::Postproc, "lift signals have no common time window");
  double num = 0.0, den = 0.0;
  for (size_t k = 1; k < ts.size(); ++k) {
    const double h = ts[k] - ts[k - 1];
    const double r0 = interpolate(ref, ts[k - 1]), r1 = interpolate(ref, ts[k]);
    const double e0 = interpolate(rom, ts[k - 1]) - r0, e1 = interpolate(rom, ts[k]) - r1;
    num += 0.5 * h * (e0 * e0 + e1 * e1);
    den += 0.5 * h * (r0 * r0 + r1 * r1);
  }
  if (!(den > 0)) throw Error(Stage::Postproc, "reference lift signal is zero on the window");
  return 100.0 * std::sqrt(num / den);
}

std::vector<Peak> find_peaks(const LiftSignal& s, double t1, double t2) {
  check_signal(s);
  std::vector<Peak> peaks;
  for (size_t k = 1; k + 1 < s.t.size(); ++k) {
    if (s.t[k] < t1 || s.t[k] > t2) continue;
    const double y0 = s.cl[k - 1], y1 = s.cl[k], y2 = s.cl[k + 1];
    if (!(y1 > y0 && y1 >= y2)) continue;
    // parabola through the three samples (nonuniform spacing)
    const double x0 = s.t[k - 1] - s.t[k], x2 = s.t[k + 1] - s.t[k];
    const double d0 = (y0 - y1) / x0, d2 = (y2 - y1) / x2;
    const double c2 = (d2 - d0) / (x2 - x0);
    const double c1 = d0 - c2 * x0;
    Peak p{s.t[k], y1};
    if (c2 < 0) {
      const double xv = -c1 / (2.0 * c2);
      if (xv > x0 && xv < x2) p = {s.t[k] + xv, y1 + c1 * xv + c2 * xv * xv};
    }
    peaks.push_back(p);
  }
  if (peaks.size() < 2) throw Error(Stage::Postproc, "fewer than two peaks in the analysis window");
  return peaks;
}

double mean_period(const std::vector<Peak>& peaks) {
  if (peaks.size() < 2) throw Error(Stage::Postproc, "fewer than two peaks");
  return (peaks.back().t - peaks.front().t) / static_cast<double>(peaks.size() - 1);
}

PeakComparison peak_and_period(const LiftSignal& ref, const LiftSignal& rom, double t1, double t2) {
  PeakComparison c;
  c.ref = find_peaks(ref, t1, t2);
  c.rom = find_peaks(rom, t1, t2);
  c.ref_period = mean_period(c.ref);
  c.rom_period = mean_period(c.rom);
  const size_t n = std::min(c.ref.size(), c.rom.size());
  for (size_t k = 0; k < n; ++k) c.errors.push_back(100.0 * (c.ref[k].value - c.rom[k].value) / c.ref[k].value);
  return c;
}

double fft_period(const LiftSignal& s, double t1, double t2, int n) {
  check_signal(s);
  if (n < 8 || !(t2 > t1)) throw Error(Stage::Postproc, "invalid FFT window");
  std::vector<double> x(static_cast<size_t>(n));
  const double h = (t2 - t1) / n;
  double mean = 0.0;
  for (int k = 0; k < n; ++k) mean += (x[k] = interpolate(s, t1 + k * h));
  mean /= n;
  for (auto& v : x) v -= mean;
  std::vector<std::complex<double>> spec(static_cast<size_t>(n / 2 + 1));
  {
    // FFTW planning is not thread-safe
    static std::mutex planner;
    const std::lock_guard<std::mutex> lock(planner);
    fftw_plan plan = fftw_plan_dft_r2c_1d(n, x.data(), reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  int best = 1;
  for (int k = 2; k < static_cast<int>(spec.size()); ++k)
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  double kf = best;
  if (best + 1 < static_cast<int>(spec.size())) {
    const double a = std::abs(spec[best - 1]), b = std::abs(spec[best]), c = std::abs(spec[best + 1]);
    const double den = a - 2.0 * b + c;
    if (den < 0) kf += 0.5 * (a - c) / den;
  }
  return (t2 - t1) / kf;
}

}  // namespace mixedrom
