#include "doctest.h"
#include "oracles.hpp"

#include "mixedrom/error.hpp"
#include "mixedrom/operators.hpp"
#include "mixedrom/pod.hpp"
#include "mixedrom/rbf.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace mixedrom;
using namespace mixedrom::testing;

namespace {

Eigen::MatrixXd kernel_matrix(const RbfInterpolant& f) {
  const Eigen::Index n = f.centers.rows();
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gaussian_kernel((f.centers.row(i) - f.centers.row(j)).norm(), f.gamma);
  return a;
}

}  // namespace

TEST_CASE("Gaussian kernel shape") {
  CHECK(gaussian_kernel(0.0, 2.0) == 1.0);
  CHECK(gaussian_kernel(0.5, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(default_gamma(Eigen::MatrixXd::Zero(1, 2)) == 1.0);
  Eigen::MatrixXd two(2, 1);
  two << 0.0, 0.25;
  CHECK(default_gamma(two) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("single centre reproduces its output") {
  Eigen::MatrixXd x(1, 2), y(1, 3);
  x << 0.3, -1.0;
  y << 2.0, -5.0, 0.125;
  const RbfInterpolant f = rbf_fit(x, y, 0.0, 0.0);
  CHECK((f.weights - y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((f.eval(x.row(0).transpose()) - y.row(0).transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interpolation is exact at the centres with zero ridge") {
  Rng rng(1);
  const Eigen::MatrixXd x = rng.matrix(15, 2), y = rng.matrix(15, 3);
  const RbfInterpolant f = rbf_fit(x, y, 0.0, 0.0);
  CHECK(f.residual <= 1e-10);
  const Eigen::MatrixXd res = kernel_matrix(f) * f.weights - y;
  CHECK(res.cwiseAbs().maxCoeff() <= 1e-10 * y.cwiseAbs().maxCoeff());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    bool out = true;
    const Eigen::VectorXd v = f.eval(x.row(r).transpose(), &out);
    CHECK_FALSE(out);
    CHECK((v - y.row(r).transpose()).cwiseAbs().maxCoeff() <= 1e-8 * y.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("weights match an independent elimination on 20 centres") {
  Rng rng(2);
  const Eigen::MatrixXd x = rng.matrix(20, 3), y = rng.matrix(20, 2);
  const RbfInterpolant f = rbf_fit(x, y, 3.0, 0.0);
  const Eigen::MatrixXd oracle = eliminate(kernel_matrix(f), y);
  CHECK((f.weights - oracle).cwiseAbs().maxCoeff() <= 1e-9 * oracle.cwiseAbs().maxCoeff());
}

TEST_CASE("output decays far from every centre") {
  Rng rng(3);
  const Eigen::MatrixXd x = rng.matrix(10, 2), y = rng.matrix(10, 2);
  const RbfInterpolant f = rbf_fit(x, y, 0.0, 0.0);
  Eigen::VectorXd z = f.lower + f.span;  // normalized (1, 1)
  z.array() += (10.0 / f.gamma + 1.5) * f.span.array();
  bool out = false;
  const Eigen::VectorXd v = f.eval(z, &out);
  CHECK(out);
  CHECK(v.cwiseAbs().maxCoeff() <= 1e-12 * y.cwiseAbs().maxCoeff());
}

TEST_CASE("midpoint of two centres matches the direct formula") {
  Rng rng(4);
  const Eigen::MatrixXd x = rng.matrix(6, 2), y = rng.matrix(6, 1);
  const RbfInterpolant f = rbf_fit(x, y, 0.0, 0.0);
  const Eigen::VectorXd z = 0.5 * (x.row(1) + x.row(4)).transpose();
  const Eigen::VectorXd zn = (z - f.lower).cwiseQuotient(f.span);
  double expect = 0.0;
  for (Eigen::Index j = 0; j < 6; ++j)
    expect += f.weights(j, 0) * std::exp(-std::pow(f.gamma * (zn.transpose() - f.centers.row(j)).norm(), 2));
  CHECK(std::abs(f.eval(z)[0] - expect) <= 1e-13 * std::max(1.0, std::abs(expect)));
}

TEST_CASE("evaluation is invariant under reordering of the training rows") {
  Rng rng(5);
  const Eigen::MatrixXd x = rng.matrix(12, 2), y = rng.matrix(12, 2);
  std::vector<int> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng.engine);
  Eigen::MatrixXd xp(12, 2), yp(12, 2);
  for (int r = 0; r < 12; ++r) {
    xp.row(r) = x.row(perm[r]);
    yp.row(r) = y.row(perm[r]);
  }
  const RbfInterpolant a = rbf_fit(x, y, 4.0, 1e-10), b = rbf_fit(xp, yp, 4.0, 1e-10);
  for (int q = 0; q < 10; ++q) {
    const Eigen::VectorXd z = rng.vector(2);
    CHECK((a.eval(z) - b.eval(z)).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.eval(z).cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("affine rescaling of the inputs leaves predictions unchanged") {
  Rng rng(6);
  const Eigen::MatrixXd x = rng.matrix(10, 2), y = rng.matrix(10, 1);
  const Eigen::Vector2d scale(250.0, -0.01), shift(-7.0, 3.0);
  Eigen::MatrixXd xs = x;
  for (Eigen::Index r = 0; r < x.rows(); ++r) xs.row(r) = x.row(r).cwiseProduct(scale.transpose()) + shift.transpose();
  const RbfInterpolant a = rbf_fit(x, y, 0.0, 0.0), b = rbf_fit(xs, y, 0.0, 0.0);
  for (int q = 0; q < 10; ++q) {
    const Eigen::VectorXd z = rng.vector(2);
    const Eigen::VectorXd zs = z.cwiseProduct(scale) + shift;
    CHECK(std::abs(a.eval(z)[0] - b.eval(zs)[0]) <= 1e-10 * std::max(1.0, std::abs(a.eval(z)[0])));
  }
}

TEST_CASE("ridge bounds the smallest eigenvalue of the regularized system") {
  Rng rng(7);
  const Eigen::MatrixXd x = rng.matrix(25, 2), y = rng.matrix(25, 1);
  const double ridge = 1e-3;
  const RbfInterpolant f = rbf_fit(x, y, 0.0, ridge);
  const Eigen::MatrixXd a = kernel_matrix(f);
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd reg = a + ridge * Eigen::MatrixXd::Identity(25, 25);
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(reg, Eigen::EigenvaluesOnly).eigenvalues()(0);
  CHECK(lmin >= ridge * (1.0 - 1e-8));
  CHECK(((reg * f.weights) - y).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("duplicate centres need a ridge") {
  Eigen::MatrixXd x(3, 1), y(3, 1);
  x << 0.0, 0.5, 0.5;
  y << 1.0, 2.0, 2.0;
  CHECK_THROWS_AS(rbf_fit(x, y, 0.0, 0.0), Error);
  CHECK_NOTHROW(rbf_fit(x, y, 0.0, 1e-8));
  CHECK_THROWS_AS(rbf_fit(x, y.topRows(2), 0.0, 0.0), Error);
}

TEST_CASE("linear table reproduces samples and midpoints") {
  Eigen::MatrixXd y(3, 2);
  y << 1.0, 2.0, 3.0, -4.0, 5.0, 0.5;
  const LinearTable t = fit_linear_table({0.5, 1.5, 1.0}, y);
  CHECK(t.x == std::vector<double>{0.5, 1.0, 1.5});
  CHECK(t.eval(0.5) == y.row(0).transpose());
  CHECK(t.eval(1.5) == y.row(1).transpose());
  CHECK(t.eval(1.0) == y.row(2).transpose());
  CHECK((t.eval(0.75) - 0.5 * (y.row(0) + y.row(2)).transpose()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(t.eval(-3.0) == y.row(0).transpose());
  CHECK(t.eval(9.0) == y.row(1).transpose());
  CHECK_THROWS_AS(fit_linear_table({1.0, 1.0}, y.topRows(2)), Error);
}

TEST_CASE("linear table matches a two-point interpolation oracle") {
  Rng rng(8);
  const std::vector<double> x = {0.0, 0.3, 0.9, 1.4, 2.0};
  const Eigen::MatrixXd y = rng.matrix(5, 3);
  const LinearTable t = fit_linear_table(x, y);
  for (int q = 0; q < 50; ++q) {
    const double z = rng.uniform(0.0, 2.0);
    size_t k = 0;
    while (x[k + 1] < z) ++k;
    const double s = (z - x[k]) / (x[k + 1] - x[k]);
    const Eigen::VectorXd expect = (1.0 - s) * y.row(k).transpose() + s * y.row(k + 1).transpose();
    CHECK((t.eval(z) - expect).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("mean-field coefficients are hat weights") {
  const LinearTable t = fit_mean_coefficients({1.0, 2.0, 4.0});
  CHECK(t.eval(2.0) == Eigen::Vector3d(0.0, 1.0, 0.0));
  CHECK((t.eval(3.0) - Eigen::Vector3d(0.0, 0.5, 0.5)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(t.eval(0.0) == Eigen::Vector3d(1.0, 0.0, 0.0));
}

TEST_CASE("projection coefficients") {
  const StructuredGrid g = rect_grid(6, 5);
  const Eigen::VectorXd w = scalar_weights(g);
  Rng rng(9);
  Eigen::MatrixXd s(scalar_size(g), 4);
  for (int k = 0; k < 4; ++k) s.col(k) = pack(random_scalar(g, rng));
  const Eigen::MatrixXd modes = pod(s, w, 3).modes;
  Eigen::MatrixXd snaps(scalar_size(g), 3);
  snaps.col(0) = modes.col(0);
  snaps.col(1).setZero();
  snaps.col(2) = s.col(3);
  const Eigen::MatrixXd g_table = projection_coefficients(snaps, modes, w);
  REQUIRE(g_table.rows() == 3);
  REQUIRE(g_table.cols() == 3);
  CHECK(std::abs(g_table(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(g_table(0, 1)) < 1e-12);
  CHECK(std::abs(g_table(0, 2)) < 1e-12);
  CHECK(g_table.row(1).cwiseAbs().maxCoeff() == 0.0);
  for (int l = 0; l < 3; ++l) {
    const double expect = inner_product(unpack_scalar(g, s.col(3)), unpack_scalar(g, modes.col(l)), g);
    CHECK(std::abs(g_table(2, l) - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
  }
  CHECK_THROWS_AS(projection_coefficients(snaps.topRows(10), modes, w), Error);
}

TEST_CASE("time-parameter inputs") {
  const Eigen::MatrixXd steady = time_parameter_inputs({0.5, 1.0}, {0.0, 0.0}, 1);
  REQUIRE(steady.cols() == 1);
  CHECK(steady(1, 0) == 1.0);
  const Eigen::MatrixXd x = time_parameter_inputs({0.5, 1.0}, {10.0, 10.5, 11.0, 7.0, 7.5, 8.0}, 3);
  REQUIRE(x.rows() == 6);
  REQUIRE(x.cols() == 2);
  CHECK(x(4, 0) == 1.0);
  CHECK(x(4, 1) == 0.5);
  CHECK(x(2, 1) == 1.0);
}

TEST_CASE("velocity training table counts") {
  Rng rng(10);
  const Eigen::MatrixXd a = rng.matrix(3, 2);
  const Eigen::MatrixXd x = velocity_training_inputs(a, 3, {0.1});
  CHECK(x.rows() == 2);
  CHECK(x.cols() == 4);
  CHECK(drop_first_instants(rng.matrix(6, 5), 3).rows() == 4);
  CHECK_THROWS_AS(velocity_training_inputs(rng.matrix(2, 2), 1, {0.1, 0.1}), Error);
}

TEST_CASE("backward differences of linear coefficients are constant") {
  const double c = 3.0, dt = 0.25;
  Eigen::MatrixXd a(8, 2);
  for (int k = 0; k < 2; ++k)
    for (int r = 0; r < 4; ++r) a.row(k * 4 + r) << c * r * dt, -c * r * dt;
  const Eigen::MatrixXd x = velocity_training_inputs(a, 4, {dt, dt});
  REQUIRE(x.rows() == 6);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    CHECK(x(r, 2) == c);
    CHECK(x(r, 3) == -c);
  }
}

TEST_CASE("training table matches a hand-rolled difference loop") {
  Rng rng(11);
  const int m = 3, n_t = 5, nu = 4;
  const Eigen::MatrixXd a = rng.matrix(m * n_t, nu), g = rng.matrix(m * n_t, 2);
  const std::vector<double> interval = {0.1, 0.2, 0.05};
  const Eigen::MatrixXd x = velocity_training_inputs(a, n_t, interval);
  const Eigen::MatrixXd gd = drop_first_instants(g, n_t);
  int row = 0;
  for (int k = 0; k < m; ++k) {
    for (int r = 1; r < n_t; ++r, ++row) {
      for (int i = 0; i < nu; ++i) {
        CHECK(x(row, i) == a(k * n_t + r, i));
        CHECK(x(row, nu + i) == (a(k * n_t + r, i) - a(k * n_t + r - 1, i)) / interval[k]);
      }
      CHECK(gd.row(row) == g.row(k * n_t + r));
    }
  }
  CHECK(row == x.rows());
}
