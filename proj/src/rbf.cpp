#include "mixedrom/rbf.hpp"

#include "mixedrom/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mixedrom {

double gaussian_kernel(double r, double gamma) {
  const double s = gamma * r;
  return std::exp(-s * s);
}

Eigen::VectorXd RbfInterpolant::normalize(const Eigen::VectorXd& z) const {
  if (z.size() != lower.size()) throw Error(Stage::Rbf, "query dimension does not match interpolant");
  return (z - lower).cwiseQuotient(span);
}

Eigen::VectorXd RbfInterpolant::eval(const Eigen::VectorXd& z, bool* extrapolated) const {
  const Eigen::VectorXd zn = normalize(z);
  if (extrapolated) *extrapolated = (zn.array() < -0.1).any() || (zn.array() > 1.1).any();
  Eigen::VectorXd k(centers.rows());
  for (Eigen::Index j = 0; j < centers.rows(); ++j)
    k[j] = gaussian_kernel((centers.row(j).transpose() - zn).norm(), gamma);
  return weights.transpose() * k;
}

double default_gamma(const Eigen::MatrixXd& c) {
  const Eigen::Index n = c.rows();
  if (n < 2) return 1.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) sum += (c.row(i) - c.row(j)).norm();
  const double mean = sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
  return mean > 0 ? 1.0 / mean : 1.0;
}

RbfInterpolant rbf_fit(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& outputs, double gamma, double ridge) {
  const Eigen::Index n = inputs.rows();
  if (n == 0) throw Error(Stage::Rbf, "no training centres");
  if (outputs.rows() != n) throw Error(Stage::Rbf, "inputs and outputs have different row counts");
  if (ridge < 0) throw Error(Stage::Rbf, "ridge must be nonnegative");
  if (!inputs.allFinite() || !outputs.allFinite()) throw Error(Stage::Rbf, "non-finite training data");
  RbfInterpolant r;
  r.lower = inputs.colwise().minCoeff().transpose();
  r.span = inputs.colwise().maxCoeff().transpose() - r.lower;
  for (Eigen::Index d = 0; d < r.span.size(); ++d)
    if (!(r.span[d] > 0)) r.span[d] = 1.0;
  r.centers.resize(n, inputs.cols());
  for (Eigen::Index i = 0; i < n; ++i) r.centers.row(i) = r.normalize(inputs.row(i).transpose()).transpose();
  r.gamma = gamma > 0 ? gamma : default_gamma(r.centers);
  r.ridge = ridge;

  if (ridge == 0.0) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        if (r.centers.row(i) == r.centers.row(j)) {
          std::ostringstream msg;
          msg << "duplicate centres " << i << " and " << j << "; use a positive ridge";
          throw Error(Stage::Rbf, msg.str());
        }
  }
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 1.0 + ridge;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = gaussian_kernel((r.centers.row(i) - r.centers.row(j)).norm(), r.gamma);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw Error(Stage::Rbf, "kernel matrix is not positive definite; increase the ridge");
  r.weights = llt.solve(outputs);
  const double ymax = outputs.cwiseAbs().maxCoeff();
  r.residual = (a * r.weights - outputs).cwiseAbs().maxCoeff() / (ymax > 0 ? ymax : 1.0);
  if (!std::isfinite(r.residual) || (ridge == 0.0 && r.residual > 1e-10)) {
    std::ostringstream msg;
    msg << "kernel system is numerically singular (relative residual " << r.residual << "); increase the ridge";
    throw Error(Stage::Rbf, msg.str());
  }
  return r;
}

// ---------------------------------------------------------------------------

Eigen::VectorXd LinearTable::eval(double q) const {
  if (x.empty()) throw Error(Stage::Rbf, "empty linear table");
  if (x.size() == 1 || q <= x.front()) return y.row(0).transpose();
  if (q >= x.back()) return y.row(y.rows() - 1).transpose();
  const auto it = std::upper_bound(x.begin(), x.end(), q);
  const Eigen::Index hi = it - x.begin();
  const Eigen::Index lo = hi - 1;
  const double s = (q - x[lo]) / (x[hi] - x[lo]);
  if (s == 0.0) return y.row(lo).transpose();
  return ((1.0 - s) * y.row(lo) + s * y.row(hi)).transpose();
}

LinearTable fit_linear_table(const std::vector<double>& x, const Eigen::MatrixXd& y) {
  if (x.empty() || static_cast<Eigen::Index>(x.size()) != y.rows())
    throw Error(Stage::Rbf, "linear table needs one row per abscissa");
  std::vector<size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
  LinearTable t;
  t.y.resize(y.rows(), y.cols());
  for (size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && x[order[k]] == x[order[k - 1]]) throw Error(Stage::Rbf, "duplicate abscissa in linear table");
    t.x.push_back(x[order[k]]);
    t.y.row(static_cast<Eigen::Index>(k)) = y.row(static_cast<Eigen::Index>(order[k]));
  }
  return t;
}

LinearTable fit_mean_coefficients(const std::vector<double>& mu) {
  const Eigen::Index m = static_cast<Eigen::Index>(mu.size());
  return fit_linear_table(mu, Eigen::MatrixXd::Identity(m, m));
}

Eigen::MatrixXd projection_coefficients(const Eigen::MatrixXd& s, const Eigen::MatrixXd& modes,
                                        const Eigen::VectorXd& w) {
  if (s.rows() != modes.rows() || s.rows() != w.size())
    throw Error(Stage::Rbf, "snapshot and basis layouts differ");
  return s.transpose() * (w.asDiagonal() * modes);
}

Eigen::MatrixXd time_parameter_inputs(const std::vector<double>& mu, const std::vector<double>& times, int n_t) {
  const Eigen::Index ns = static_cast<Eigen::Index>(times.size());
  if (n_t < 1 || ns != static_cast<Eigen::Index>(mu.size()) * n_t)
    throw Error(Stage::Rbf, "time instants do not match sample count");
  Eigen::MatrixXd x(ns, n_t == 1 ? 1 : 2);
  for (Eigen::Index r = 0; r < ns; ++r) {
    const Eigen::Index k = r / n_t;
    x(r, 0) = mu[k];
    if (n_t > 1) x(r, 1) = times[r] - times[k * n_t];
  }
  return x;
}

Eigen::MatrixXd velocity_training_inputs(const Eigen::MatrixXd& a, int n_t, const std::vector<double>& interval) {
  if (n_t < 2) throw Error(Stage::Rbf, "velocity-coefficient training needs at least two instants per sample");
  const Eigen::Index m = static_cast<Eigen::Index>(interval.size());
  if (a.rows() != m * n_t) throw Error(Stage::Rbf, "coefficient rows do not match samples");
  const Eigen::Index nu = a.cols();
  Eigen::MatrixXd x(m * (n_t - 1), 2 * nu);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (int r = 1; r < n_t; ++r) {
      const Eigen::Index row = k * (n_t - 1) + (r - 1);
      const Eigen::Index cur = k * n_t + r;
      x.row(row).head(nu) = a.row(cur);
      x.row(row).tail(nu) = (a.row(cur) - a.row(cur - 1)) / interval[k];
    }
  }
  return x;
}

Eigen::MatrixXd drop_first_instants(const Eigen::MatrixXd& v, int n_t) {
  if (n_t < 2 || v.rows() % n_t != 0) throw Error(Stage::Rbf, "rows not grouped by sample");
  const Eigen::Index m = v.rows() / n_t;
  Eigen::MatrixXd out(m * (n_t - 1), v.cols());
  for (Eigen::Index k = 0; k < m; ++k) out.middleRows(k * (n_t - 1), n_t - 1) = v.middleRows(k * n_t + 1, n_t - 1);
  return out;
}

}  // namespace mixedrom
