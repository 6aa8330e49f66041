#pragma once

#include "support.hpp"

#include "mixedrom/galerkin.hpp"
#include "mixedrom/operators.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace mixedrom::testing {

// Lattice-based stencil oracle; solid lattice positions are skipped. Face
// values are neighbour means inside and traces on the boundary.
class Stencil {
public:
  explicit Stencil(const StructuredGrid& g) : g_(g) {
    const auto& faces = g.boundary_faces();
    for (int k = 0; k < static_cast<int>(faces.size()); ++k) {
      const Vec2 n = faces[k].normal;
      const int dir = n.x > 0.5 ? 0 : n.x < -0.5 ? 1 : n.y > 0.5 ? 2 : 3;
      face_[{faces[k].cell, dir}] = k;
    }
  }

  // east, west, north, south face values
  std::array<double, 4> faces(const ScalarField& f, int i, int j) const {
    const int c = g_.cell_at(i, j);
    const int nb[4] = {g_.cell_at(i + 1, j), g_.cell_at(i - 1, j), g_.cell_at(i, j + 1), g_.cell_at(i, j - 1)};
    std::array<double, 4> v{};
    for (int d = 0; d < 4; ++d)
      v[d] = nb[d] >= 0 ? 0.5 * (f.cells[c] + f.cells[nb[d]]) : f.trace[face_.at({c, d})];
    return v;
  }

  // div(eta grad f) with face viscosities from the neighbour mean or the trace; null eta means 1
  ScalarField laplacian(const ScalarField& f, const ScalarField* eta = nullptr) const {
    ScalarField out(g_);
    const double hx = g_.dx(), hy = g_.dy();
    for (int j = 0; j < g_.ny(); ++j) {
      for (int i = 0; i < g_.nx(); ++i) {
        const int c = g_.cell_at(i, j);
        if (c < 0) continue;
        const int nb[4] = {g_.cell_at(i + 1, j), g_.cell_at(i - 1, j), g_.cell_at(i, j + 1), g_.cell_at(i, j - 1)};
        const std::array<double, 4> w = eta ? faces(*eta, i, j) : std::array<double, 4>{1.0, 1.0, 1.0, 1.0};
        double s = 0.0;
        for (int d = 0; d < 4; ++d) {
          const double h = d < 2 ? hx : hy;
          if (nb[d] >= 0)
            s += w[d] * (f.cells[nb[d]] - f.cells[c]) / (h * h);
          else
            s += 2.0 * w[d] * (f.trace[face_.at({c, d})] - f.cells[c]) / (h * h);
        }
        out.cells[c] = s;
      }
    }
    extrapolate_trace(g_, out);
    return out;
  }

  ScalarField ddx(const ScalarField& f) const { return difference(f, 0); }
  ScalarField ddy(const ScalarField& f) const { return difference(f, 1); }

  ScalarField divergence(const VectorField& u) const {
    ScalarField out(g_);
    out.cells = ddx(u.x).cells + ddy(u.y).cells;
    extrapolate_trace(g_, out);
    return out;
  }

  // div(eta (grad u)^T); null eta means 1
  VectorField transpose_gradient_divergence(const VectorField& u, const ScalarField* eta = nullptr) const {
    VectorField out(g_);
    out.x.cells = difference(ddx(u.x), 0, eta).cells + difference(ddx(u.y), 1, eta).cells;
    out.y.cells = difference(ddy(u.x), 0, eta).cells + difference(ddy(u.y), 1, eta).cells;
    extrapolate_trace(g_, out);
    return out;
  }

  // div(w (x) u) with face values from the neighbour mean or the trace
  VectorField convection(const VectorField& w, const VectorField& u) const {
    VectorField out(g_);
    for (int j = 0; j < g_.ny(); ++j) {
      for (int i = 0; i < g_.nx(); ++i) {
        const int c = g_.cell_at(i, j);
        if (c < 0) continue;
        const auto wx = faces(w.x, i, j), wy = faces(w.y, i, j);
        const auto ux = faces(u.x, i, j), uy = faces(u.y, i, j);
        out.x.cells[c] = (wx[0] * ux[0] - wx[1] * ux[1]) / g_.dx() + (wy[2] * ux[2] - wy[3] * ux[3]) / g_.dy();
        out.y.cells[c] = (wx[0] * uy[0] - wx[1] * uy[1]) / g_.dx() + (wy[2] * uy[2] - wy[3] * uy[3]) / g_.dy();
      }
    }
    extrapolate_trace(g_, out);
    return out;
  }

  double volume_sum(const ScalarField& a, const ScalarField& b) const {
    double s = 0.0;
    for (int c = 0; c < g_.num_cells(); ++c) s += a.cells[c] * b.cells[c] * g_.dx() * g_.dy();
    return s;
  }
  double volume_sum(const VectorField& a, const VectorField& b) const {
    return volume_sum(a.x, b.x) + volume_sum(a.y, b.y);
  }

private:
  ScalarField difference(const ScalarField& f, int axis, const ScalarField* eta = nullptr) const {
    ScalarField out(g_);
    for (int j = 0; j < g_.ny(); ++j) {
      for (int i = 0; i < g_.nx(); ++i) {
        if (g_.cell_at(i, j) < 0) continue;
        auto v = faces(f, i, j);
        if (eta) {
          const auto w = faces(*eta, i, j);
          for (int d = 0; d < 4; ++d) v[d] *= w[d];
        }
        out.cells[g_.cell_at(i, j)] = axis == 0 ? (v[0] - v[1]) / g_.dx() : (v[2] - v[3]) / g_.dy();
      }
    }
    extrapolate_trace(g_, out);
    return out;
  }

  const StructuredGrid& g_;
  std::map<std::pair<int, int>, int> face_;
};

inline ReducedBasis random_basis(const StructuredGrid& g, Rng& rng, int n_u, int n_p, int n_nut = 0, int n_mean = 0) {
  ReducedBasis b;
  b.n_u = n_u;
  b.n_p = n_p;
  b.velocity.resize(vector_size(g), n_u);
  for (int i = 0; i < n_u; ++i) b.velocity.col(i) = pack(random_vector(g, rng));
  b.pressure.resize(scalar_size(g), n_p);
  for (int i = 0; i < n_p; ++i) b.pressure.col(i) = pack(random_scalar(g, rng));
  b.viscosity.resize(scalar_size(g), n_nut);
  for (int i = 0; i < n_nut; ++i) b.viscosity.col(i) = pack(random_scalar(g, rng));
  b.mean_viscosity.resize(n_mean > 0 ? scalar_size(g) : 0, n_mean);
  for (int i = 0; i < n_mean; ++i) b.mean_viscosity.col(i) = pack(random_scalar(g, rng));
  return b;
}

// Gaussian elimination with partial pivoting on a dense copy.
inline Eigen::MatrixXd eliminate(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    for (Eigen::Index r = k + 1; r < n; ++r)
      if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
    a.row(k).swap(a.row(piv));
    b.row(k).swap(b.row(piv));
    for (Eigen::Index r = k + 1; r < n; ++r) {
      const double f = a(r, k) / a(k, k);
      for (Eigen::Index c = k; c < n; ++c) a(r, c) -= f * a(k, c);
      for (Eigen::Index c = 0; c < b.cols(); ++c) b(r, c) -= f * b(k, c);
    }
  }
  Eigen::MatrixXd x(n, b.cols());
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      double s = b(k, c);
      for (Eigen::Index j = k + 1; j < n; ++j) s -= a(k, j) * x(j, c);
      x(k, c) = s / a(k, k);
    }
  }
  return x;
}

// Largest sine of the principal angles between two spans given by columns
// that are orthonormal in the Euclidean inner product.
inline double max_principal_sine(const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2) {
  const Eigen::MatrixXd residual = q1 - q2 * (q2.transpose() * q1);
  return Eigen::JacobiSVD<Eigen::MatrixXd>(residual).singularValues()(0);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline BoundarySetup lid_setup(const StructuredGrid& g) {
  BoundarySetup bcs;
  bcs.patches.resize(g.patches().size());
  for (size_t p = 0; p < g.patches().size(); ++p) {
    bcs.patches[p].velocity = BcKind::Dirichlet;
    if (g.patches()[p].name == "top") {
      bcs.patches[p].parametrized = true;
      bcs.patches[p].velocity_value = {1.0, 0.0};
    }
  }
  return bcs;
}

}  // namespace mixedrom::testing
