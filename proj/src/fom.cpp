#include "mixedrom/fom.hpp"

#include "mixedrom/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mixedrom {

FomConfig fom_config(const Config& c) {
  FomConfig f;
  f.geometry = make_geometry(c);
  f.nu = c.get_double("nu", f.nu);
  f.mu = c.get_doubles("mu");
  const std::string dt = c.get_string("dt", "auto");
  f.dt = dt == "auto" ? 0.0 : c.get_double("dt", 0.0);
  f.cfl_target = c.get_double("cfl_target", f.cfl_target);
  f.velocity_scale = c.get_double("velocity_scale", f.velocity_scale);
  f.spinup = c.get_double("spinup", f.spinup);
  f.n_t = c.get_int("n_t", f.n_t);
  f.save_every = c.get_int("save_every", f.save_every);
  f.steady_tol = c.get_double("steady_tol", f.steady_tol);
  f.cs = c.get_double("cs", f.cs);
  f.delta_les = c.get_double("delta_les", f.delta_les);
  f.eddy_viscosity = c.get_bool("eddy_viscosity", f.eddy_viscosity);
  const std::string conv = c.get_string("convection", "central");
  if (conv == "central") f.convection = ConvectionScheme::Central;
  else if (conv == "upwind") f.convection = ConvectionScheme::Upwind;
  else throw Error(Stage::Config, "convection must be central or upwind");
  f.phase_align = c.get_bool("phase_align", f.phase_align);
  f.max_align_time = c.get_double("max_align_time", f.max_align_time);
  f.rho = c.get_double("rho", f.rho);

  if (!(f.nu > 0)) throw Error(Stage::Config, "nu must be positive");
  if (f.dt < 0) throw Error(Stage::Config, "dt must be positive");
  if (f.save_every < 1) throw Error(Stage::Config, "save_every must be >= 1");
  if (f.n_t < 1) throw Error(Stage::Config, "n_t must be >= 1");
  if (f.spinup < 0) throw Error(Stage::Config, "spinup must be >= 0");
  for (size_t i = 0; i < f.mu.size(); ++i)
    for (size_t j = i + 1; j < f.mu.size(); ++j)
      if (f.mu[i] == f.mu[j]) throw Error(Stage::Config, "parameter samples must be distinct");
  return f;
}

ScalarField eddy_viscosity_field(const VectorField& u, const StructuredGrid& grid, double cs, double delta) {
  const TensorField t = gradient(u, grid);
  const double c = (cs * delta) * (cs * delta);
  ScalarField nut(grid);
  for (int i = 0; i < grid.num_cells(); ++i) {
    const double sxx = t.xx.cells[i];
    const double syy = t.yy.cells[i];
    const double sxy = 0.5 * (t.xy.cells[i] + t.yx.cells[i]);
    nut.cells[i] = c * std::sqrt(2.0 * (sxx * sxx + syy * syy + 2.0 * sxy * sxy));
  }
  extrapolate_trace(grid, nut);
  return nut;
}

VectorField momentum_rhs(const VectorField& u, const ScalarField& nut, double nu, const StructuredGrid& grid,
                         ConvectionScheme scheme) {
  const VectorField conv = convection(u, u, grid, scheme);
  const VectorField lap = laplacian(u, 1.0, grid);
  const VectorField tdiv = transpose_gradient_divergence(u, nullptr, grid);
  const VectorField tdiv_eta = transpose_gradient_divergence(u, &nut, grid);
  VectorField r(grid);
  r.x.cells = -conv.x.cells + nu * (lap.x.cells + tdiv.x.cells) + nut.cells.cwiseProduct(lap.x.cells) +
              tdiv_eta.x.cells;
  r.y.cells = -conv.y.cells + nu * (lap.y.cells + tdiv.y.cells) + nut.cells.cwiseProduct(lap.y.cells) +
              tdiv_eta.y.cells;
  extrapolate_trace(grid, r);
  return r;
}

double auto_time_step(const StructuredGrid& grid, const FomConfig& config, double mu) {
  const double h = std::min(grid.dx(), grid.dy());
  const double u = std::max(std::abs(mu) * config.velocity_scale, 1e-12);
  const double convective = config.cfl_target * h / u;
  const double diffusive = 0.2 / (config.nu * (1.0 / (grid.dx() * grid.dx()) + 1.0 / (grid.dy() * grid.dy())));
  const double central = 0.5 * 2.0 * config.nu / (u * u);
  double dt = std::min({convective, diffusive});
  if (config.convection == ConvectionScheme::Central) dt = std::min(dt, central);
  return dt;
}

// ---------------------------------------------------------------------------

FomSolver::FomSolver(const StructuredGrid& grid, const BoundarySetup& bcs, const FomConfig& config, double mu,
                     double dt)
    : grid_(grid), bcs_(bcs), config_(config), mu_(mu), dt_(dt) {
  if (!(dt > 0)) throw Error(Stage::Fom, "time step must be positive");
  delta_ = config.delta_les > 0 ? config.delta_les : std::sqrt(grid.dx() * grid.dy());
  u_ref_ = std::max(std::abs(mu), 1e-300);
  l_ref_ = std::max(grid.spec().lx, grid.spec().ly);
  assemble_pressure_matrix();
}

ScalarField FomSolver::pressure_operator(const ScalarField& p_cells) const {
  ScalarField p = p_cells;
  apply_pressure_trace(grid_, bcs_, p);
  VectorField g = gradient(p, grid_);
  apply_homogeneous_velocity_trace(grid_, bcs_, g);
  return divergence(g, grid_);
}

void FomSolver::assemble_pressure_matrix() {
  const int n = grid_.num_cells();
  affine_ = pressure_operator(ScalarField(grid_));
  std::vector<Eigen::Triplet<double>> trip;
  // Colored probing: the operator couples cells at most two lattice steps
  // apart in each direction, so cells of equal (i mod 5, j mod 5) never share a row.
  const int nx = grid_.nx(), ny = grid_.ny();
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      ScalarField probe(grid_);
      bool any = false;
      for (int j = b; j < ny; j += 5)
        for (int i = a; i < nx; i += 5)
          if (const int c = grid_.cell_at(i, j); c >= 0) probe.cells[c] = 1.0, any = true;
      if (!any) continue;
      const ScalarField resp = pressure_operator(probe);
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          const int r = grid_.cell_at(i, j);
          if (r < 0) continue;
          const double v = resp.cells[r] - affine_.cells[r];
          if (v == 0.0) continue;
          const int si = i - 2 + ((a - (i - 2)) % 5 + 5) % 5;
          const int sj = j - 2 + ((b - (j - 2)) % 5 + 5) % 5;
          const int s = grid_.cell_at(si, sj);
          if (s < 0) throw Error(Stage::Fom, "pressure operator stencil wider than expected");
          trip.emplace_back(r, s, v);
        }
      }
    }
  }
  if (!has_pressure_dirichlet(bcs_)) pinned_ = 0;
  matrix_.resize(n, n);
  if (pinned_ >= 0) {
    std::erase_if(trip, [&](const Eigen::Triplet<double>& t) { return t.row() == pinned_; });
    trip.emplace_back(pinned_, pinned_, 1.0);
  }
  matrix_.setFromTriplets(trip.begin(), trip.end());
  matrix_.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  lu_->analyzePattern(matrix_);
  lu_->factorize(matrix_);
  if (lu_->info() != Eigen::Success) throw Error(Stage::Fom, "pressure matrix factorization failed: " + lu_->lastErrorMessage());
}

FomState FomSolver::initial_state() const {
  FomState s;
  s.u = VectorField(grid_);
  apply_velocity_trace(grid_, bcs_, mu_, s.u);
  s.p = ScalarField(grid_);
  apply_pressure_trace(grid_, bcs_, s.p);
  project(s.u, &s.p);
  s.nut = config_.eddy_viscosity ? eddy_viscosity_field(s.u, grid_, config_.cs, delta_) : ScalarField(grid_);
  return s;
}

void FomSolver::project(VectorField& u, ScalarField* p_out) const {
  apply_velocity_trace(grid_, bcs_, mu_, u);
  const ScalarField div = divergence(u, grid_);
  Eigen::VectorXd rhs = div.cells / dt_ - affine_.cells;
  if (pinned_ >= 0) rhs[pinned_] = 0.0;
  ScalarField p(grid_);
  p.cells = lu_->solve(rhs);
  const double res = (matrix_ * p.cells - rhs).norm();
  const double scale = std::max(rhs.norm(), 1e-300);
  if (!std::isfinite(res) || res > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "pressure solve residual " << res / scale << " exceeds 1e-10";
    throw Error(Stage::Fom, msg.str());
  }
  apply_pressure_trace(grid_, bcs_, p);
  const VectorField g = gradient(p, grid_);
  u.x.cells -= dt_ * g.x.cells;
  u.y.cells -= dt_ * g.y.cells;
  apply_velocity_trace(grid_, bcs_, mu_, u);
  if (p_out) *p_out = p;
}

double FomSolver::cfl(const VectorField& u) const {
  const double umax = (u.x.cells.array().square() + u.y.cells.array().square()).sqrt().maxCoeff();
  return umax * dt_ / std::min(grid_.dx(), grid_.dy());
}

double FomSolver::relative_divergence(const VectorField& u) const {
  const double speed = std::max(u.x.cells.cwiseAbs().maxCoeff(), u.y.cells.cwiseAbs().maxCoeff());
  return divergence(u, grid_).cells.cwiseAbs().maxCoeff() * l_ref_ / std::max(u_ref_, speed);
}

void FomSolver::step(FomState& s) const {
  const double c = cfl(s.u);
  if (!(c <= 0.9)) {
    std::ostringstream msg;
    msg << "CFL " << c << " exceeds 0.9 at t=" << s.t << " (mu=" << mu_ << ", dt=" << dt_ << ")";
    throw Error(Stage::Fom, msg.str());
  }
  const VectorField r = momentum_rhs(s.u, s.nut, config_.nu, grid_, config_.convection);
  VectorField u = s.u;
  u.x.cells += dt_ * r.x.cells;
  u.y.cells += dt_ * r.y.cells;
  project(u, &s.p);
  const double d = relative_divergence(u);
  if (!(d <= 1e-8)) {
    std::ostringstream msg;
    msg << "divergence " << d << " after projection at t=" << s.t + dt_;
    throw Error(Stage::Fom, msg.str());
  }
  s.u = std::move(u);
  s.t += dt_;
  // viscosity consistent with the stored velocity
  s.nut = config_.eddy_viscosity ? eddy_viscosity_field(s.u, grid_, config_.cs, delta_) : ScalarField(grid_);
}

Vec2 FomSolver::force(const FomState& s) const {
  const std::string& patch = config_.geometry.force_patch;
  if (patch.empty()) throw Error(Stage::Fom, "geometry has no force patch");
  const double mu_dyn = config_.rho * config_.nu;
  const Vec2 dn = normal_derivative_integral(s.u, patch, grid_);
  const Vec2 pn = boundary_flux(s.p, patch, grid_);
  // grid normals point out of the fluid, i.e. into the body
  return {pn.x - 2.0 * mu_dyn * dn.x, pn.y - 2.0 * mu_dyn * dn.y};
}

double FomSolver::lift_coefficient(const FomState& s) const {
  return force(s).y / (0.5 * config_.rho * mu_ * mu_ * config_.geometry.d_ref);
}

double FomSolver::kinetic_energy(const VectorField& u) const { return 0.5 * inner_product(u, u, grid_); }

// ---------------------------------------------------------------------------

SnapshotArchive generate_snapshots(const FomConfig& config, const Config& raw, const SaveHook& on_save) {
  if (config.mu.empty()) throw Error(Stage::Config, "no parameter samples (mu)");
  const StructuredGrid grid(config.geometry.grid);
  const BoundarySetup bcs = boundary_setup(grid, config.geometry);
  const int m = static_cast<int>(config.mu.size());
  const bool track_lift = !config.geometry.force_patch.empty();
  const int lift_rows = track_lift ? (config.n_t - 1) * config.save_every + 1 : 0;

  SnapshotArchive a;
  a.n_t = config.n_t;
  a.config = raw;
  a.u.resize(vector_size(grid), m * config.n_t);
  a.p.resize(scalar_size(grid), m * config.n_t);
  a.nut.resize(scalar_size(grid), m * config.n_t);
  a.lift.resize(lift_rows, track_lift ? 2 * m : 0);

  for (int k = 0; k < m; ++k) {
    const double mu = config.mu[k];
    const double dt = config.dt > 0 ? config.dt : auto_time_step(grid, config, mu);
    FomSolver solver(grid, bcs, config, mu, dt);
    FomState s = solver.initial_state();
    const long spin_steps = std::lround(config.spinup / dt);
    bool steady = false;
    for (long n = 0; n < spin_steps; ++n) {
      if (config.steady_tol > 0 && config.n_t == 1) {
        const VectorField prev = s.u;
        solver.step(s);
        const double change = std::max((s.u.x.cells - prev.x.cells).cwiseAbs().maxCoeff(),
                                       (s.u.y.cells - prev.y.cells).cwiseAbs().maxCoeff()) /
                              dt;
        if (change < config.steady_tol * std::abs(mu)) {
          steady = true;
          break;
        }
      } else {
        solver.step(s);
      }
    }
    if (config.steady_tol > 0 && config.n_t == 1 && !steady) {
      std::ostringstream msg;
      msg << "sample mu=" << mu << " did not reach the steady tolerance within spinup=" << config.spinup;
      throw Error(Stage::Fom, msg.str());
    }
    if (config.phase_align && track_lift) {
      double prev = solver.lift_coefficient(s);
      const long max_steps = std::lround(config.max_align_time / dt);
      bool found = false;
      for (long n = 0; n < max_steps; ++n) {
        solver.step(s);
        const double cl = solver.lift_coefficient(s);
        if (prev < 0.0 && cl >= 0.0) {
          found = true;
          break;
        }
        prev = cl;
      }
      if (!found) {
        std::ostringstream msg;
        msg << "sample mu=" << mu << ": no upward lift zero crossing within " << config.max_align_time;
        throw Error(Stage::Fom, msg.str());
      }
    }
    a.mu.push_back(mu);
    a.dt.push_back(dt);
    a.interval.push_back(dt * config.save_every);
    int row = 0;
    for (int l = 0; l < config.n_t; ++l) {
      if (l > 0) {
        for (int n = 0; n < config.save_every; ++n) {
          solver.step(s);
          if (track_lift) {
            a.lift(row, 2 * k) = s.t;
            a.lift(row, 2 * k + 1) = solver.lift_coefficient(s);
            ++row;
          }
        }
      } else if (track_lift) {
        a.lift(row, 2 * k) = s.t;
        a.lift(row, 2 * k + 1) = solver.lift_coefficient(s);
        ++row;
      }
      const int col = k * config.n_t + l;
      a.u.col(col) = pack(s.u);
      a.p.col(col) = pack(s.p);
      a.nut.col(col) = pack(s.nut);
      a.times.push_back(s.t);
      if (on_save) on_save(k, l, s);
    }
  }
  return a;
}

}  // namespace mixedrom
