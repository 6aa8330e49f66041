#include "mixedrom/pod.hpp"

#include "mixedrom/error.hpp"
#include "mixedrom/operators.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mixedrom {

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& s, const Eigen::VectorXd& w) {
  if (s.rows() != w.size()) throw Error(Stage::Pod, "snapshot rows do not match weights");
  const Eigen::MatrixXd ws = w.asDiagonal() * s;
  Eigen::MatrixXd c = s.transpose() * ws;
  return 0.5 * (c + c.transpose());
}

SymmetricEigen eigendecompose(const Eigen::MatrixXd& c) {
  SymmetricEigen e = jacobi_eigen(c);
  e.values = e.values.cwiseMax(0.0);
  return e;
}

int numerical_rank(const Eigen::VectorXd& lambda) {
  if (lambda.size() == 0 || !(lambda[0] > 0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] > 1e-12 * lambda[0]) ++r;
  return r;
}

Eigen::MatrixXd compute_modes(const Eigen::MatrixXd& s, const Eigen::VectorXd& w, const SymmetricEigen& eig,
                              int n_keep) {
  const int rank = numerical_rank(eig.values);
  if (n_keep > rank) {
    std::ostringstream msg;
    msg << "requested " << n_keep << " modes but the numerical rank is " << rank;
    throw Error(Stage::Pod, msg.str());
  }
  Eigen::MatrixXd modes = s * eig.vectors.leftCols(n_keep);
  auto norm = [&](const Eigen::VectorXd& v) { return std::sqrt(v.dot(w.asDiagonal() * v)); };
  for (int i = 0; i < n_keep; ++i) modes.col(i) /= norm(modes.col(i));
  // two passes of modified Gram-Schmidt in the weighted product
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < n_keep; ++i) {
      for (int j = 0; j < i; ++j) {
        const double proj = modes.col(j).dot(w.asDiagonal() * modes.col(i));
        modes.col(i) -= proj * modes.col(j);
      }
      modes.col(i) /= norm(modes.col(i));
    }
  }
  return modes;
}

Eigen::MatrixXd snapshot_span_basis(const Eigen::MatrixXd& s, const Eigen::VectorXd& w, const SymmetricEigen& eig) {
  auto norm = [&](const Eigen::VectorXd& v) { return std::sqrt(v.dot(w.asDiagonal() * v)); };
  double scale = 0.0;
  for (Eigen::Index c = 0; c < s.cols(); ++c) scale = std::max(scale, norm(s.col(c)));
  const Eigen::MatrixXd raw = s * eig.vectors;
  Eigen::MatrixXd basis(s.rows(), raw.cols());
  int kept = 0;
  for (Eigen::Index i = 0; i < raw.cols(); ++i) {
    Eigen::VectorXd v = raw.col(i);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < kept; ++j) v -= basis.col(j).dot(w.asDiagonal() * v) * basis.col(j);
    const double n = norm(v);
    if (!(n > 1e-13 * scale)) continue;
    basis.col(kept++) = v / n;
  }
  return basis.leftCols(kept);
}

Eigen::VectorXd cumulative_energy(const Eigen::VectorXd& lambda) {
  Eigen::VectorXd c(lambda.size());
  const double total = lambda.sum();
  double run = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    run += lambda[i];
    c[i] = total > 0 ? std::min(run / total, 1.0) : 1.0;
  }
  if (c.size() > 0) c[c.size() - 1] = 1.0;
  return c;
}

PodResult pod(const Eigen::MatrixXd& s, const Eigen::VectorXd& w, int max_modes) {
  PodResult r;
  const SymmetricEigen eig = eigendecompose(correlation_matrix(s, w));
  r.eigenvalues = eig.values;
  r.rank = numerical_rank(eig.values);
  r.modes = compute_modes(s, w, eig, std::min(max_modes, r.rank));
  return r;
}

Eigen::MatrixXd supremizer_modes(const Eigen::MatrixXd& chi, const StructuredGrid& grid, const BoundarySetup& bcs) {
  Eigen::MatrixXd out(vector_size(grid), chi.cols());
  const double h = std::min(grid.dx(), grid.dy());
  for (Eigen::Index i = 0; i < chi.cols(); ++i) {
    const ScalarField c = unpack_scalar(grid, chi.col(i));
    VectorField g = gradient(c, grid);
    apply_homogeneous_velocity_trace(grid, bcs, g);
    const double gn = l2_norm(g, grid);
    if (!(gn > 1e-10 * l2_norm(c, grid) / h))
      throw Error(Stage::Pod, "pressure mode " + std::to_string(i) +
                                  " has no gradient; constant pressure modes must be excluded");
    const double pairing = inner_product(c, divergence(g, grid), grid);
    const double sign = pairing < 0 ? -1.0 : 1.0;
    out.col(i) = sign / gn * pack(g);
  }
  return out;
}

namespace {

// Solves the compact Laplace problem with Dirichlet values on selected faces
// and zero gradient on the rest; returns the packed scalar field.
Eigen::VectorXd laplace_solve(const StructuredGrid& grid, const std::vector<char>& dirichlet,
                              const std::vector<double>& value) {
  const int n = grid.num_cells();
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (const auto& f : grid.interior_faces()) {
    const double c = f.area / f.dist;
    trip.emplace_back(f.owner, f.owner, -c);
    trip.emplace_back(f.owner, f.neighbour, c);
    trip.emplace_back(f.neighbour, f.neighbour, -c);
    trip.emplace_back(f.neighbour, f.owner, c);
  }
  const auto& faces = grid.boundary_faces();
  bool any = false;
  for (size_t k = 0; k < faces.size(); ++k) {
    if (!dirichlet[k]) continue;
    any = true;
    const double c = faces[k].area / faces[k].dist;
    trip.emplace_back(faces[k].cell, faces[k].cell, -c);
    rhs[faces[k].cell] -= c * value[k];
  }
  if (!any) throw Error(Stage::Pod, "lifting problem has no Dirichlet faces");
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(a);
  if (lu.info() != Eigen::Success) throw Error(Stage::Pod, "lifting Laplace factorization failed");
  const Eigen::VectorXd x = lu.solve(rhs);
  const double res = (a * x - rhs).norm();
  if (!std::isfinite(res) || res > 1e-10 * std::max(rhs.norm(), 1e-300)) {
    std::ostringstream msg;
    msg << "lifting Laplace solve did not converge, residual " << res;
    throw Error(Stage::Pod, msg.str());
  }
  ScalarField f(grid);
  f.cells = x;
  for (size_t k = 0; k < faces.size(); ++k) f.trace[k] = dirichlet[k] ? value[k] : x[faces[k].cell];
  return pack(f);
}

}  // namespace

LiftingFunctions build_lifting_functions(const StructuredGrid& grid, const BoundarySetup& bcs) {
  if (bcs.patches.size() != grid.patches().size()) throw Error(Stage::Pod, "boundary setup does not match grid");
  const auto list = scalar_bcs(bcs);
  if (list.empty()) throw Error(Stage::Pod, "no parametrized Dirichlet patches for lifting");
  const auto& faces = grid.boundary_faces();
  const size_t nb = faces.size();
  LiftingFunctions out;
  out.velocity.resize(vector_size(grid), static_cast<Eigen::Index>(list.size()));
  for (size_t l = 0; l < list.size(); ++l) {
    std::vector<char> dir(nb, 0);
    std::vector<double> val(nb, 0.0);
    for (size_t k = 0; k < nb; ++k) {
      const int patch = faces[k].patch;
      if (bcs.patches[patch].velocity == BcKind::Dirichlet) {
        dir[k] = 1;
        val[k] = patch == list[l].patch ? 1.0 : 0.0;
      }
    }
    const ScalarField psi = unpack_scalar(grid, laplace_solve(grid, dir, val));
    VectorField v(grid);
    (list[l].component == 0 ? v.x : v.y) = psi;
    out.velocity.col(static_cast<Eigen::Index>(l)) = pack(v);
  }
  if (has_pressure_dirichlet(bcs)) {
    std::vector<char> dir(nb, 0);
    std::vector<double> val(nb, 0.0);
    for (size_t k = 0; k < nb; ++k) {
      if (bcs.patches[faces[k].patch].pressure == BcKind::Dirichlet) {
        dir[k] = 1;
        val[k] = 1.0;
      }
    }
    out.pressure = laplace_solve(grid, dir, val);
  } else {
    out.pressure = Eigen::VectorXd::Zero(scalar_size(grid));
  }
  return out;
}

Homogenized homogenize(const Eigen::MatrixXd& u, const Eigen::MatrixXd& p, const LiftingFunctions& lifting,
                       const Eigen::MatrixXd& u_bc, const Eigen::VectorXd& p_out) {
  if (u_bc.rows() != lifting.velocity.cols() || u_bc.cols() != u.cols() || p_out.size() != p.cols() ||
      lifting.velocity.rows() != u.rows() || lifting.pressure.size() != p.rows())
    throw Error(Stage::Pod, "homogenization dimension mismatch");
  Homogenized h;
  h.u = u - lifting.velocity * u_bc;
  h.p = p - lifting.pressure * p_out.transpose();
  return h;
}

MeanViscosity mean_viscosity_fields(const Eigen::MatrixXd& nut, int n_t) {
  if (n_t < 1 || nut.cols() % n_t != 0) throw Error(Stage::Pod, "viscosity snapshots not grouped by sample");
  const Eigen::Index m = nut.cols() / n_t;
  MeanViscosity out;
  out.means.resize(nut.rows(), m);
  out.fluctuations.resize(nut.rows(), nut.cols());
  for (Eigen::Index k = 0; k < m; ++k) {
    out.means.col(k) = nut.middleCols(k * n_t, n_t).rowwise().mean();
    out.fluctuations.middleCols(k * n_t, n_t) = nut.middleCols(k * n_t, n_t).colwise() - out.means.col(k);
  }
  return out;
}

}  // namespace mixedrom
