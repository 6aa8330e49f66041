#include "mixedrom/grid.hpp"

#include "mixedrom/error.hpp"

#include <algorithm>

namespace mixedrom {

namespace {

// Name of the solid block containing lattice cell (i, j), or nullptr when fluid.
const SolidBlock* solid_at(const GridSpec& spec, double dx, double dy, int i, int j) {
  const double xc = (i + 0.5) * dx;
  const double yc = (j + 0.5) * dy;
  for (const auto& b : spec.blocks) {
    if (xc > b.x0 && xc < b.x1 && yc > b.y0 && yc < b.y1) return &b;
  }
  return nullptr;
}

}  // namespace

StructuredGrid::StructuredGrid(const GridSpec& spec) : spec_(spec) {
  if (spec.nx < 1 || spec.ny < 1) throw Error(Stage::Grid, "nx and ny must be positive");
  if (!(spec.lx > 0) || !(spec.ly > 0)) throw Error(Stage::Grid, "lx and ly must be positive");
  dx_ = spec.lx / spec.nx;
  dy_ = spec.ly / spec.ny;

  lattice_.assign(static_cast<size_t>(spec.nx) * spec.ny, -1);
  std::vector<double> vols;
  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      if (solid_at(spec, dx_, dy_, i, j)) continue;
      lattice_[static_cast<size_t>(j) * spec.nx + i] = static_cast<int>(centres_.size());
      centres_.push_back({(i + 0.5) * dx_, (j + 0.5) * dy_});
      vols.push_back(dx_ * dy_);
    }
  }
  if (centres_.empty()) throw Error(Stage::Grid, "grid has no fluid cells");
  volumes_ = Eigen::Map<Eigen::VectorXd>(vols.data(), static_cast<Eigen::Index>(vols.size()));

  auto boundary = [&](int cell, const std::string& name, Vec2 n, double area, double dist) {
    BoundaryFace f;
    f.cell = cell;
    f.patch = add_patch(name);
    f.normal = n;
    f.area = area;
    f.dist = dist;
    const Vec2 c = centres_[cell];
    f.centre = {c.x + n.x * dist, c.y + n.y * dist};
    patches_[f.patch].faces.push_back(static_cast<int>(bfaces_.size()));
    bfaces_.push_back(f);
  };

  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      const int c = cell_at(i, j);
      if (c < 0) continue;
      // west
      if (i == 0) {
        boundary(c, spec.left, {-1, 0}, dy_, 0.5 * dx_);
      } else if (cell_at(i - 1, j) < 0) {
        boundary(c, solid_at(spec, dx_, dy_, i - 1, j)->name, {-1, 0}, dy_, 0.5 * dx_);
      }
      // east
      if (i == spec.nx - 1) {
        boundary(c, spec.right, {1, 0}, dy_, 0.5 * dx_);
      } else if (const int e = cell_at(i + 1, j); e < 0) {
        boundary(c, solid_at(spec, dx_, dy_, i + 1, j)->name, {1, 0}, dy_, 0.5 * dx_);
      } else {
        ifaces_.push_back({c, e, {1, 0}, dy_, dx_});
      }
      // south
      if (j == 0) {
        boundary(c, spec.bottom, {0, -1}, dx_, 0.5 * dy_);
      } else if (cell_at(i, j - 1) < 0) {
        boundary(c, solid_at(spec, dx_, dy_, i, j - 1)->name, {0, -1}, dx_, 0.5 * dy_);
      }
      // north
      if (j == spec.ny - 1) {
        boundary(c, spec.top, {0, 1}, dx_, 0.5 * dy_);
      } else if (const int nn = cell_at(i, j + 1); nn < 0) {
        boundary(c, solid_at(spec, dx_, dy_, i, j + 1)->name, {0, 1}, dx_, 0.5 * dy_);
      } else {
        ifaces_.push_back({c, nn, {0, 1}, dx_, dy_});
      }
    }
  }
}

int StructuredGrid::cell_at(int i, int j) const {
  if (i < 0 || j < 0 || i >= spec_.nx || j >= spec_.ny) return -1;
  return lattice_[static_cast<size_t>(j) * spec_.nx + i];
}

int StructuredGrid::add_patch(const std::string& name) {
  for (size_t k = 0; k < patches_.size(); ++k) {
    if (patches_[k].name == name) return static_cast<int>(k);
  }
  patches_.push_back({name, {}});
  return static_cast<int>(patches_.size() - 1);
}

int StructuredGrid::patch_index(const std::string& name) const {
  for (size_t k = 0; k < patches_.size(); ++k) {
    if (patches_[k].name == name) return static_cast<int>(k);
  }
  throw Error(Stage::Grid, "unknown patch '" + name + "'");
}

bool StructuredGrid::has_patch(const std::string& name) const {
  return std::any_of(patches_.begin(), patches_.end(), [&](const Patch& p) { return p.name == name; });
}

// ---------------------------------------------------------------------------

int scalar_size(const StructuredGrid& grid) { return grid.num_cells() + grid.num_boundary_faces(); }
int vector_size(const StructuredGrid& grid) { return 2 * scalar_size(grid); }

Eigen::VectorXd pack(const ScalarField& f) {
  Eigen::VectorXd v(f.cells.size() + f.trace.size());
  v << f.cells, f.trace;
  return v;
}

Eigen::VectorXd pack(const VectorField& f) {
  Eigen::VectorXd v(2 * (f.x.cells.size() + f.x.trace.size()));
  v << f.x.cells, f.y.cells, f.x.trace, f.y.trace;
  return v;
}

ScalarField unpack_scalar(const StructuredGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const int nc = grid.num_cells();
  const int nb = grid.num_boundary_faces();
  if (v.size() != nc + nb) throw Error(Stage::Grid, "scalar column has wrong length");
  ScalarField f;
  f.cells = v.head(nc);
  f.trace = v.tail(nb);
  return f;
}

VectorField unpack_vector(const StructuredGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const int nc = grid.num_cells();
  const int nb = grid.num_boundary_faces();
  if (v.size() != 2 * (nc + nb)) throw Error(Stage::Grid, "vector column has wrong length");
  VectorField f;
  f.x.cells = v.segment(0, nc);
  f.y.cells = v.segment(nc, nc);
  f.x.trace = v.segment(2 * nc, nb);
  f.y.trace = v.segment(2 * nc + nb, nb);
  return f;
}

Eigen::VectorXd scalar_weights(const StructuredGrid& grid) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(scalar_size(grid));
  w.head(grid.num_cells()) = grid.volumes();
  return w;
}

Eigen::VectorXd vector_weights(const StructuredGrid& grid) {
  const int nc = grid.num_cells();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(vector_size(grid));
  w.segment(0, nc) = grid.volumes();
  w.segment(nc, nc) = grid.volumes();
  return w;
}

// ---------------------------------------------------------------------------

std::vector<ScalarBc> scalar_bcs(const BoundarySetup& bcs) {
  std::vector<ScalarBc> out;
  for (size_t p = 0; p < bcs.patches.size(); ++p) {
    const auto& b = bcs.patches[p];
    if (b.velocity == BcKind::Dirichlet && b.parametrized) {
      out.push_back({static_cast<int>(p), 0});
      out.push_back({static_cast<int>(p), 1});
    }
  }
  return out;
}

Eigen::VectorXd bc_values(const BoundarySetup& bcs, double mu) {
  const auto list = scalar_bcs(bcs);
  Eigen::VectorXd v(static_cast<Eigen::Index>(list.size()));
  for (size_t k = 0; k < list.size(); ++k) {
    const auto& b = bcs.patches[list[k].patch];
    v[static_cast<Eigen::Index>(k)] = mu * (list[k].component == 0 ? b.velocity_value.x : b.velocity_value.y);
  }
  return v;
}

bool has_pressure_dirichlet(const BoundarySetup& bcs) {
  return std::any_of(bcs.patches.begin(), bcs.patches.end(),
                     [](const PatchBc& b) { return b.pressure == BcKind::Dirichlet; });
}

namespace {

void check_setup(const StructuredGrid& grid, const BoundarySetup& bcs) {
  if (bcs.patches.size() != grid.patches().size())
    throw Error(Stage::Grid, "boundary setup does not match grid patches");
}

}  // namespace

void apply_velocity_trace(const StructuredGrid& grid, const BoundarySetup& bcs, double mu, VectorField& u) {
  check_setup(grid, bcs);
  const auto& faces = grid.boundary_faces();
  for (size_t f = 0; f < faces.size(); ++f) {
    const auto& b = bcs.patches[faces[f].patch];
    if (b.velocity == BcKind::Dirichlet) {
      const double s = b.parametrized ? mu : 1.0;
      u.x.trace[f] = s * b.velocity_value.x;
      u.y.trace[f] = s * b.velocity_value.y;
    } else {
      u.x.trace[f] = u.x.cells[faces[f].cell];
      u.y.trace[f] = u.y.cells[faces[f].cell];
    }
  }
}

void apply_homogeneous_velocity_trace(const StructuredGrid& grid, const BoundarySetup& bcs, VectorField& u) {
  check_setup(grid, bcs);
  const auto& faces = grid.boundary_faces();
  for (size_t f = 0; f < faces.size(); ++f) {
    if (bcs.patches[faces[f].patch].velocity == BcKind::Dirichlet) {
      u.x.trace[f] = 0.0;
      u.y.trace[f] = 0.0;
    } else {
      u.x.trace[f] = u.x.cells[faces[f].cell];
      u.y.trace[f] = u.y.cells[faces[f].cell];
    }
  }
}

void apply_pressure_trace(const StructuredGrid& grid, const BoundarySetup& bcs, ScalarField& p) {
  check_setup(grid, bcs);
  const auto& faces = grid.boundary_faces();
  for (size_t f = 0; f < faces.size(); ++f) {
    const auto& b = bcs.patches[faces[f].patch];
    p.trace[f] = b.pressure == BcKind::Dirichlet ? b.pressure_value : p.cells[faces[f].cell];
  }
}

void extrapolate_trace(const StructuredGrid& grid, ScalarField& f) {
  const auto& faces = grid.boundary_faces();
  for (size_t k = 0; k < faces.size(); ++k) f.trace[k] = f.cells[faces[k].cell];
}

void extrapolate_trace(const StructuredGrid& grid, VectorField& f) {
  extrapolate_trace(grid, f.x);
  extrapolate_trace(grid, f.y);
}

}  // namespace mixedrom
