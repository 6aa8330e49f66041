#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mixedrom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned solid region; cells whose centre lies inside are removed from the grid
/// and the faces they expose form the patch `name`.
struct SolidBlock {
  std::string name;
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};

struct GridSpec {
  int nx = 0;
  int ny = 0;
  double lx = 1.0;
  double ly = 1.0;
  std::string left = "left";
  std::string right = "right";
  std::string bottom = "bottom";
  std::string top = "top";
  std::vector<SolidBlock> blocks;
};

struct InteriorFace {
  int owner = 0;
  int neighbour = 0;
  Vec2 normal;      // owner -> neighbour
  double area = 0;  // |S_f| per unit depth
  double dist = 0;  // centre-to-centre distance
};

struct BoundaryFace {
  int cell = 0;
  int patch = 0;
  Vec2 normal;      // outward from the fluid domain
  double area = 0;
  double dist = 0;  // cell centre to face centre
  Vec2 centre;
};

struct Patch {
  std::string name;
  std::vector<int> faces;  // indices into StructuredGrid::boundary_faces()
};

/// Uniform orthogonal 2D finite-volume grid with optional solid blocks.
/// Immutable after construction; every method is const and thread-safe.
class StructuredGrid {
public:
  explicit StructuredGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int nx() const { return spec_.nx; }
  int ny() const { return spec_.ny; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }

  int num_cells() const { return static_cast<int>(volumes_.size()); }
  int num_boundary_faces() const { return static_cast<int>(bfaces_.size()); }

  /// Active-cell index of lattice position (i, j), or -1 for solid / out of range.
  int cell_at(int i, int j) const;
  Vec2 centre(int cell) const { return centres_[cell]; }
  double volume(int cell) const { return volumes_[cell]; }
  const Eigen::VectorXd& volumes() const { return volumes_; }
  double total_volume() const { return volumes_.sum(); }

  const std::vector<InteriorFace>& interior_faces() const { return ifaces_; }
  const std::vector<BoundaryFace>& boundary_faces() const { return bfaces_; }
  const std::vector<Patch>& patches() const { return patches_; }

  /// Throws Error(Stage::Grid) for unknown names.
  int patch_index(const std::string& name) const;
  bool has_patch(const std::string& name) const;
  const Patch& patch(const std::string& name) const { return patches_[patch_index(name)]; }

private:
  int add_patch(const std::string& name);

  GridSpec spec_;
  double dx_ = 0, dy_ = 0;
  std::vector<int> lattice_;  // nx*ny -> cell or -1
  std::vector<Vec2> centres_;
  Eigen::VectorXd volumes_;
  std::vector<InteriorFace> ifaces_;
  std::vector<BoundaryFace> bfaces_;
  std::vector<Patch> patches_;
};

// ---------------------------------------------------------------------------
// Fields. Every field carries a value per active cell plus a trace value per
// boundary face. Operators read face values at the boundary from the trace, so
// Dirichlet and zero-gradient treatment is encoded entirely in how the trace is
// filled (prescribed value vs. copy of the adjacent cell).
// ---------------------------------------------------------------------------

struct ScalarField {
  Eigen::VectorXd cells;
  Eigen::VectorXd trace;

  ScalarField() = default;
  explicit ScalarField(const StructuredGrid& grid)
      : cells(Eigen::VectorXd::Zero(grid.num_cells())),
        trace(Eigen::VectorXd::Zero(grid.num_boundary_faces())) {}
};

struct VectorField {
  ScalarField x;
  ScalarField y;

  VectorField() = default;
  explicit VectorField(const StructuredGrid& grid) : x(grid), y(grid) {}
};

/// Second-order tensor field, component (i, j) = d_i u_j for a velocity gradient.
struct TensorField {
  ScalarField xx, xy, yx, yy;

  TensorField() = default;
  explicit TensorField(const StructuredGrid& grid) : xx(grid), xy(grid), yx(grid), yy(grid) {}
};

/// Packed column layouts used by snapshot matrices and POD bases:
///   scalar: [cells | trace]
///   vector: [x.cells | y.cells | x.trace | y.trace]
int scalar_size(const StructuredGrid& grid);
int vector_size(const StructuredGrid& grid);
Eigen::VectorXd pack(const ScalarField& f);
Eigen::VectorXd pack(const VectorField& f);
ScalarField unpack_scalar(const StructuredGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& v);
VectorField unpack_vector(const StructuredGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& v);

/// Diagonal volume weights matching the packed layouts (zero on trace entries).
Eigen::VectorXd scalar_weights(const StructuredGrid& grid);
Eigen::VectorXd vector_weights(const StructuredGrid& grid);

// ---------------------------------------------------------------------------
// Boundary conditions
// ---------------------------------------------------------------------------

enum class BcKind { Dirichlet, ZeroGradient };

struct PatchBc {
  BcKind velocity = BcKind::ZeroGradient;
  /// Dirichlet value; when `parametrized` the imposed value is mu * velocity_value.
  Vec2 velocity_value;
  bool parametrized = false;
  BcKind pressure = BcKind::ZeroGradient;
  double pressure_value = 0.0;
};

/// One entry per grid patch, in StructuredGrid::patches() order.
struct BoundarySetup {
  std::vector<PatchBc> patches;
};

/// A scalar velocity boundary condition: component `component` (0 = x, 1 = y)
/// on a parametrized Dirichlet patch.
struct ScalarBc {
  int patch = 0;
  int component = 0;
};

std::vector<ScalarBc> scalar_bcs(const BoundarySetup& bcs);
Eigen::VectorXd bc_values(const BoundarySetup& bcs, double mu);
bool has_pressure_dirichlet(const BoundarySetup& bcs);

/// Fill traces for a physical velocity at parameter mu.
void apply_velocity_trace(const StructuredGrid& grid, const BoundarySetup& bcs, double mu, VectorField& u);
/// Same rule with all Dirichlet values set to zero (velocity corrections, supremizers).
void apply_homogeneous_velocity_trace(const StructuredGrid& grid, const BoundarySetup& bcs, VectorField& u);
void apply_pressure_trace(const StructuredGrid& grid, const BoundarySetup& bcs, ScalarField& p);
/// Trace copied from the adjacent cell on every face.
void extrapolate_trace(const StructuredGrid& grid, ScalarField& f);
void extrapolate_trace(const StructuredGrid& grid, VectorField& f);

}  // namespace mixedrom
