#include "mixedrom/operators.hpp"

#include "mixedrom/error.hpp"

#include <cmath>

namespace mixedrom {

namespace {

void check(const ScalarField& f, const StructuredGrid& grid) {
  if (f.cells.size() != grid.num_cells() || f.trace.size() != grid.num_boundary_faces())
    throw Error(Stage::Grid, "field size does not match grid");
}

void check(const VectorField& f, const StructuredGrid& grid) {
  check(f.x, grid);
  check(f.y, grid);
}

void finish(ScalarField& out, const StructuredGrid& grid) {
  out.cells.array() /= grid.volumes().array();
  extrapolate_trace(grid, out);
}

}  // namespace

double inner_product(const ScalarField& f, const ScalarField& g, const StructuredGrid& grid) {
  check(f, grid);
  check(g, grid);
  return (f.cells.array() * g.cells.array() * grid.volumes().array()).sum();
}

double inner_product(const VectorField& f, const VectorField& g, const StructuredGrid& grid) {
  return inner_product(f.x, g.x, grid) + inner_product(f.y, g.y, grid);
}

double l2_norm(const ScalarField& f, const StructuredGrid& grid) { return std::sqrt(inner_product(f, f, grid)); }
double l2_norm(const VectorField& f, const StructuredGrid& grid) { return std::sqrt(inner_product(f, f, grid)); }

Vec2 boundary_flux(const ScalarField& f, const std::string& patch, const StructuredGrid& grid) {
  check(f, grid);
  const auto& faces = grid.boundary_faces();
  Vec2 out;
  for (int k : grid.patch(patch).faces) {
    const auto& bf = faces[k];
    out.x += f.trace[k] * bf.normal.x * bf.area;
    out.y += f.trace[k] * bf.normal.y * bf.area;
  }
  return out;
}

double boundary_integral(const ScalarField& f, const std::string& patch, const StructuredGrid& grid) {
  check(f, grid);
  double s = 0.0;
  for (int k : grid.patch(patch).faces) s += f.trace[k] * grid.boundary_faces()[k].area;
  return s;
}

double boundary_product(const ScalarField& f, const ScalarField& g, const std::string& patch,
                        const StructuredGrid& grid) {
  check(f, grid);
  check(g, grid);
  double s = 0.0;
  for (int k : grid.patch(patch).faces) s += f.trace[k] * g.trace[k] * grid.boundary_faces()[k].area;
  return s;
}

double boundary_product(const VectorField& f, const VectorField& g, const std::string& patch,
                        const StructuredGrid& grid) {
  return boundary_product(f.x, g.x, patch, grid) + boundary_product(f.y, g.y, patch, grid);
}

Vec2 normal_derivative_integral(const VectorField& u, const std::string& patch, const StructuredGrid& grid) {
  check(u, grid);
  const auto& faces = grid.boundary_faces();
  Vec2 out;
  for (int k : grid.patch(patch).faces) {
    const auto& bf = faces[k];
    out.x += (u.x.trace[k] - u.x.cells[bf.cell]) / bf.dist * bf.area;
    out.y += (u.y.trace[k] - u.y.cells[bf.cell]) / bf.dist * bf.area;
  }
  return out;
}

VectorField gradient(const ScalarField& p, const StructuredGrid& grid) {
  check(p, grid);
  VectorField g(grid);
  for (const auto& f : grid.interior_faces()) {
    const double pf = 0.5 * (p.cells[f.owner] + p.cells[f.neighbour]);
    const double sx = pf * f.normal.x * f.area;
    const double sy = pf * f.normal.y * f.area;
    g.x.cells[f.owner] += sx;
    g.y.cells[f.owner] += sy;
    g.x.cells[f.neighbour] -= sx;
    g.y.cells[f.neighbour] -= sy;
  }
  const auto& faces = grid.boundary_faces();
  for (size_t k = 0; k < faces.size(); ++k) {
    const auto& f = faces[k];
    g.x.cells[f.cell] += p.trace[k] * f.normal.x * f.area;
    g.y.cells[f.cell] += p.trace[k] * f.normal.y * f.area;
  }
  finish(g.x, grid);
  finish(g.y, grid);
  return g;
}

TensorField gradient(const VectorField& u, const StructuredGrid& grid) {
  const VectorField gx = gradient(u.x, grid);
  const VectorField gy = gradient(u.y, grid);
  TensorField t;
  t.xx = gx.x;
  t.yx = gx.y;
  t.xy = gy.x;
  t.yy = gy.y;
  return t;
}

ScalarField divergence(const VectorField& u, const StructuredGrid& grid) {
  check(u, grid);
  ScalarField d(grid);
  for (const auto& f : grid.interior_faces()) {
    const double flux = 0.5 * ((u.x.cells[f.owner] + u.x.cells[f.neighbour]) * f.normal.x +
                               (u.y.cells[f.owner] + u.y.cells[f.neighbour]) * f.normal.y) *
                        f.area;
    d.cells[f.owner] += flux;
    d.cells[f.neighbour] -= flux;
  }
  const auto& faces = grid.boundary_faces();
  for (size_t k = 0; k < faces.size(); ++k) {
    const auto& f = faces[k];
    d.cells[f.cell] += (u.x.trace[k] * f.normal.x + u.y.trace[k] * f.normal.y) * f.area;
  }
  finish(d, grid);
  return d;
}

namespace {

template <typename FaceNu, typename BoundaryNu>
ScalarField laplacian_impl(const ScalarField& u, const StructuredGrid& grid, FaceNu face_nu, BoundaryNu bnd_nu) {
  check(u, grid);
  ScalarField out(grid);
  const auto& ifaces = grid.interior_faces();
  for (size_t k = 0; k < ifaces.size(); ++k) {
    const auto& f = ifaces[k];
    const double flux = face_nu(f) * f.area * (u.cells[f.neighbour] - u.cells[f.owner]) / f.dist;
    out.cells[f.owner] += flux;
    out.cells[f.neighbour] -= flux;
  }
  const auto& faces = grid.boundary_faces();
  for (size_t k = 0; k < faces.size(); ++k) {
    const auto& f = faces[k];
    out.cells[f.cell] += bnd_nu(k) * f.area * (u.trace[k] - u.cells[f.cell]) / f.dist;
  }
  finish(out, grid);
  return out;
}

}  // namespace

ScalarField laplacian(const ScalarField& u, const ScalarField& nu, const StructuredGrid& grid) {
  check(nu, grid);
  return laplacian_impl(
      u, grid, [&](const InteriorFace& f) { return 0.5 * (nu.cells[f.owner] + nu.cells[f.neighbour]); },
      [&](size_t k) { return nu.trace[k]; });
}

ScalarField laplacian(const ScalarField& u, double nu, const StructuredGrid& grid) {
  return laplacian_impl(u, grid, [nu](const InteriorFace&) { return nu; }, [nu](size_t) { return nu; });
}

VectorField laplacian(const VectorField& u, double nu, const StructuredGrid& grid) {
  VectorField out;
  out.x = laplacian(u.x, nu, grid);
  out.y = laplacian(u.y, nu, grid);
  return out;
}

VectorField laplacian(const VectorField& u, const ScalarField& nu, const StructuredGrid& grid) {
  VectorField out;
  out.x = laplacian(u.x, nu, grid);
  out.y = laplacian(u.y, nu, grid);
  return out;
}

VectorField transpose_gradient_divergence(const VectorField& u, const ScalarField* eta, const StructuredGrid& grid) {
  check(u, grid);
  if (eta) check(*eta, grid);
  const TensorField t = gradient(u, grid);
  // (grad u)^T has component (i, j) = d_j u_i = t(j, i); result_j = sum_i n_i (grad u)^T_ij.
  VectorField out(grid);
  auto face_term = [&](int c, Vec2 n, double w, double txx, double txy, double tyx, double tyy, double sign) {
    // (grad u)^T_{xj} = t(j, x), (grad u)^T_{yj} = t(j, y)
    const double rx = n.x * txx + n.y * txy;  // j = x: n_x t(x,x) + n_y t(x,y)
    const double ry = n.x * tyx + n.y * tyy;  // j = y: n_x t(y,x) + n_y t(y,y)
    out.x.cells[c] += sign * w * rx;
    out.y.cells[c] += sign * w * ry;
  };
  for (const auto& f : grid.interior_faces()) {
    const int o = f.owner, nb = f.neighbour;
    const double w = (eta ? 0.5 * (eta->cells[o] + eta->cells[nb]) : 1.0) * f.area;
    const double txx = 0.5 * (t.xx.cells[o] + t.xx.cells[nb]);
    const double txy = 0.5 * (t.xy.cells[o] + t.xy.cells[nb]);
    const double tyx = 0.5 * (t.yx.cells[o] + t.yx.cells[nb]);
    const double tyy = 0.5 * (t.yy.cells[o] + t.yy.cells[nb]);
    face_term(o, f.normal, w, txx, txy, tyx, tyy, 1.0);
    face_term(nb, f.normal, w, txx, txy, tyx, tyy, -1.0);
  }
  const auto& faces = grid.boundary_faces();
  for (size_t k = 0; k < faces.size(); ++k) {
    const auto& f = faces[k];
    const double w = (eta ? eta->trace[k] : 1.0) * f.area;
    face_term(f.cell, f.normal, w, t.xx.trace[k], t.xy.trace[k], t.yx.trace[k], t.yy.trace[k], 1.0);
  }
  finish(out.x, grid);
  finish(out.y, grid);
  return out;
}

VectorField convection(const VectorField& w, const VectorField& u, const StructuredGrid& grid,
                       ConvectionScheme scheme) {
  check(w, grid);
  check(u, grid);
  VectorField out(grid);
  for (const auto& f : grid.interior_faces()) {
    const int o = f.owner, nb = f.neighbour;
    const double flux =
        0.5 * ((w.x.cells[o] + w.x.cells[nb]) * f.normal.x + (w.y.cells[o] + w.y.cells[nb]) * f.normal.y) * f.area;
    double ux, uy;
    if (scheme == ConvectionScheme::Central) {
      ux = 0.5 * (u.x.cells[o] + u.x.cells[nb]);
      uy = 0.5 * (u.y.cells[o] + u.y.cells[nb]);
    } else {
      const int up = flux >= 0.0 ? o : nb;
      ux = u.x.cells[up];
      uy = u.y.cells[up];
    }
    out.x.cells[o] += flux * ux;
    out.y.cells[o] += flux * uy;
    out.x.cells[nb] -= flux * ux;
    out.y.cells[nb] -= flux * uy;
  }
  const auto& faces = grid.boundary_faces();
  for (size_t k = 0; k < faces.size(); ++k) {
    const auto& f = faces[k];
    const double flux = (w.x.trace[k] * f.normal.x + w.y.trace[k] * f.normal.y) * f.area;
    out.x.cells[f.cell] += flux * u.x.trace[k];
    out.y.cells[f.cell] += flux * u.y.trace[k];
  }
  finish(out.x, grid);
  finish(out.y, grid);
  return out;
}

ScalarField multiply(const ScalarField& eta, const ScalarField& f) {
  ScalarField out;
  out.cells = eta.cells.cwiseProduct(f.cells);
  out.trace = eta.trace.cwiseProduct(f.trace);
  return out;
}

VectorField multiply(const ScalarField& eta, const VectorField& f) {
  VectorField out;
  out.x = multiply(eta, f.x);
  out.y = multiply(eta, f.y);
  return out;
}

}  // namespace mixedrom
