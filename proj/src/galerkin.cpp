#include "mixedrom/galerkin.hpp"

#include "mixedrom/error.hpp"
#include "mixedrom/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace mixedrom {

namespace {

void check_basis(const ReducedBasis& b, const StructuredGrid& grid) {
  if (b.velocity.rows() != vector_size(grid) || b.velocity.cols() != b.n_velocity())
    throw Error(Stage::Galerkin, "velocity basis does not match grid or declared mode counts");
  if (b.pressure.rows() != scalar_size(grid) || b.pressure.cols() != b.n_pressure())
    throw Error(Stage::Galerkin, "pressure basis does not match grid or declared mode counts");
  if (b.viscosity.cols() > 0 && b.viscosity.rows() != scalar_size(grid))
    throw Error(Stage::Galerkin, "viscosity basis does not match grid");
  if (b.mean_viscosity.cols() > 0 && b.mean_viscosity.rows() != scalar_size(grid))
    throw Error(Stage::Galerkin, "mean viscosity fields do not match grid");
}

std::vector<VectorField> velocity_fields(const ReducedBasis& b, const StructuredGrid& grid) {
  std::vector<VectorField> f;
  for (Eigen::Index i = 0; i < b.velocity.cols(); ++i) f.push_back(unpack_vector(grid, b.velocity.col(i)));
  return f;
}

std::vector<ScalarField> scalar_fields(const Eigen::MatrixXd& m, const StructuredGrid& grid) {
  std::vector<ScalarField> f;
  for (Eigen::Index i = 0; i < m.cols(); ++i) f.push_back(unpack_scalar(grid, m.col(i)));
  return f;
}

// (Phi^T W F): rows test functions, columns packed fields.
Eigen::MatrixXd project(const Eigen::MatrixXd& test, const Eigen::VectorXd& w, const Eigen::MatrixXd& fields) {
  return test.transpose() * (w.asDiagonal() * fields);
}

// Fills slices[i](j, :) = (test_i, fields(:, k)) for one j.
void scatter_row(Tensor3& t, Eigen::Index j, const Eigen::MatrixXd& proj) {
  for (Eigen::Index i = 0; i < proj.rows(); ++i) t[i].row(j) = proj.row(i);
}

Tensor3 turbulence_tensor(const Eigen::MatrixXd& eta, const std::vector<VectorField>& phi, const ReducedBasis& b,
                          const StructuredGrid& grid, bool transpose_term) {
  const Eigen::Index nj = eta.cols();
  const Eigen::Index nk = static_cast<Eigen::Index>(phi.size());
  if (nj == 0) return Tensor3(static_cast<size_t>(nk), Eigen::MatrixXd(0, nk));
  const auto etas = scalar_fields(eta, grid);
  std::vector<VectorField> lap;
  if (!transpose_term)
    for (const auto& f : phi) lap.push_back(laplacian(f, 1.0, grid));
  const Eigen::VectorXd w = vector_weights(grid);
  Tensor3 t(static_cast<size_t>(b.velocity.cols()), Eigen::MatrixXd(nj, nk));
  Eigen::MatrixXd fields(vector_size(grid), nk);
  for (Eigen::Index j = 0; j < nj; ++j) {
    for (Eigen::Index k = 0; k < nk; ++k)
      fields.col(k) = transpose_term ? pack(transpose_gradient_divergence(phi[k], &etas[j], grid))
                                     : pack(multiply(etas[j], lap[k]));
    scatter_row(t, j, project(b.velocity, w, fields));
  }
  return t;
}

}  // namespace

double check_mass_matrix(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw Error(Stage::Galerkin, "mass matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 0)) throw Error(Stage::Galerkin, "mass matrix is not positive definite (min eigenvalue " +
                                                   std::to_string(lmin) + ")");
  return lmin;
}

void assemble_linear(const ReducedBasis& b, const StructuredGrid& grid, ReducedOperators& ops) {
  check_basis(b, grid);
  const auto phi = velocity_fields(b, grid);
  const Eigen::VectorXd wv = vector_weights(grid);
  const Eigen::VectorXd ws = scalar_weights(grid);
  const Eigen::Index n = b.velocity.cols();
  const Eigen::Index np = b.pressure.cols();
  Eigen::MatrixXd lap(vector_size(grid), n), tdiv(vector_size(grid), n), div(scalar_size(grid), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    lap.col(j) = pack(laplacian(phi[j], 1.0, grid));
    tdiv.col(j) = pack(transpose_gradient_divergence(phi[j], nullptr, grid));
    div.col(j) = pack(divergence(phi[j], grid));
  }
  Eigen::MatrixXd grad(vector_size(grid), np);
  for (Eigen::Index j = 0; j < np; ++j) grad.col(j) = pack(gradient(unpack_scalar(grid, b.pressure.col(j)), grid));
  ops.M = project(b.velocity, wv, b.velocity);
  ops.M = 0.5 * (ops.M + ops.M.transpose());
  ops.B = project(b.velocity, wv, lap);
  ops.BT = project(b.velocity, wv, tdiv);
  ops.H = project(b.velocity, wv, grad);
  ops.P = project(b.pressure, ws, div);
  if (n > 0) check_mass_matrix(ops.M);
}

void assemble_convection(const ReducedBasis& b, const StructuredGrid& grid, ReducedOperators& ops) {
  check_basis(b, grid);
  const auto phi = velocity_fields(b, grid);
  const Eigen::Index n = b.velocity.cols();
  const Eigen::VectorXd w = vector_weights(grid);
  ops.C.assign(static_cast<size_t>(n), Eigen::MatrixXd(n, n));
  Eigen::MatrixXd fields(vector_size(grid), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) fields.col(k) = pack(convection(phi[j], phi[k], grid));
    scatter_row(ops.C, j, project(b.velocity, w, fields));
  }
}

void assemble_turbulence(const ReducedBasis& b, const StructuredGrid& grid, ReducedOperators& ops) {
  check_basis(b, grid);
  const auto phi = velocity_fields(b, grid);
  ops.CT1 = turbulence_tensor(b.viscosity, phi, b, grid, false);
  ops.CT2 = turbulence_tensor(b.viscosity, phi, b, grid, true);
  ops.CT1_mean = turbulence_tensor(b.mean_viscosity, phi, b, grid, false);
  ops.CT2_mean = turbulence_tensor(b.mean_viscosity, phi, b, grid, true);
}

void assemble_penalty(const ReducedBasis& b, const StructuredGrid& grid, const BoundarySetup& bcs,
                      ReducedOperators& ops) {
  check_basis(b, grid);
  const auto list = scalar_bcs(bcs);
  const auto phi = velocity_fields(b, grid);
  const Eigen::Index n = b.velocity.cols();
  ops.D.resize(n, static_cast<Eigen::Index>(list.size()));
  ops.E.assign(list.size(), Eigen::MatrixXd(n, n));
  for (size_t l = 0; l < list.size(); ++l) {
    const std::string& name = grid.patches().at(list[l].patch).name;
    const int c = list[l].component;
    for (Eigen::Index i = 0; i < n; ++i) {
      const ScalarField& fi = c == 0 ? phi[i].x : phi[i].y;
      ops.D(i, static_cast<Eigen::Index>(l)) = boundary_integral(fi, name, grid);
      for (Eigen::Index j = 0; j <= i; ++j) {
        const ScalarField& fj = c == 0 ? phi[j].x : phi[j].y;
        const double e = boundary_product(fi, fj, name, grid);
        ops.E[l](i, j) = e;
        ops.E[l](j, i) = e;
      }
    }
  }
}

namespace {

Eigen::Vector2d viscous_traction(const VectorField& u, const StructuredGrid& grid, const ForceOptions& o) {
  const Vec2 dn = normal_derivative_integral(u, o.patch, grid);
  Eigen::Vector2d f(2.0 * o.mu_dyn * dn.x, 2.0 * o.mu_dyn * dn.y);
  if (o.symmetric_strain) {
    // mu (grad u + grad u^T) n: half of the normal-derivative term plus the transpose part
    const TensorField t = gradient(u, grid);
    Eigen::Vector2d tr = Eigen::Vector2d::Zero();
    for (int k : grid.patch(o.patch).faces) {
      const auto& bf = grid.boundary_faces()[k];
      // (grad u^T n)_j = sum_i n_i d_j u_i
      tr.x() += (bf.normal.x * t.xx.trace[k] + bf.normal.y * t.xy.trace[k]) * bf.area;
      tr.y() += (bf.normal.x * t.yx.trace[k] + bf.normal.y * t.yy.trace[k]) * bf.area;
    }
    f = 0.5 * f + o.mu_dyn * tr;
  }
  return f;
}

}  // namespace

void assemble_forces(const ReducedBasis& b, const StructuredGrid& grid, const ForceOptions& o, ReducedOperators& ops) {
  check_basis(b, grid);
  if (o.patch.empty()) {
    ops.delta.resize(0, 2);
    ops.theta.resize(0, 2);
    return;
  }
  grid.patch_index(o.patch);
  const Eigen::Index n = b.velocity.cols();
  const Eigen::Index np = b.pressure.cols();
  ops.delta.resize(n, 2);
  ops.theta.resize(np, 2);
  for (Eigen::Index i = 0; i < n; ++i)
    ops.delta.row(i) = viscous_traction(unpack_vector(grid, b.velocity.col(i)), grid, o).transpose();
  for (Eigen::Index j = 0; j < np; ++j) {
    const Vec2 t = boundary_flux(unpack_scalar(grid, b.pressure.col(j)), o.patch, grid);
    ops.theta(j, 0) = t.x;
    ops.theta(j, 1) = t.y;
  }
}

Eigen::Vector2d surface_force(const Eigen::VectorXd& u, const Eigen::VectorXd& p, const StructuredGrid& grid,
                              const ForceOptions& o) {
  const Eigen::Vector2d visc = viscous_traction(unpack_vector(grid, u), grid, o);
  const Vec2 pn = boundary_flux(unpack_scalar(grid, p), o.patch, grid);
  return visc - Eigen::Vector2d(pn.x, pn.y);
}

}  // namespace mixedrom
