#include "mixedrom/archive.hpp"
#include "mixedrom/error.hpp"
#include "mixedrom/fom.hpp"
#include "mixedrom/operators.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace mixedrom;
using namespace mixedrom::testing;

namespace {

struct Case {
  Geometry geometry;
  StructuredGrid grid;
  BoundarySetup bcs;
  FomConfig config;
  explicit Case(const std::string& text)
      : geometry(make_geometry(Config::from_string(text))),
        grid(geometry.grid),
        bcs(boundary_setup(grid, geometry)),
        config(fom_config(Config::from_string(text))) {}
};

}  // namespace

TEST_CASE("eddy viscosity of constant and sheared flows") {
  const StructuredGrid g = rect_grid(8, 8);
  const double cs = 0.17, delta = 0.125, s = 2.5;
  VectorField k;
  k.x = sample(g, [](double, double) { return 1.0; });
  k.y = sample(g, [](double, double) { return 0.3; });
  CHECK(eddy_viscosity_field(k, g, cs, delta).cells.cwiseAbs().maxCoeff() <= 1e-14);

  VectorField shear;
  shear.x = sample(g, [&](double, double y) { return s * y; });
  shear.y = sample(g, [](double, double) { return 0.0; });
  const ScalarField nut = eddy_viscosity_field(shear, g, cs, delta);
  // for u = (s y, 0): S_xy = s / 2, sqrt(2 S:S) = s
  const double expected = (cs * delta) * (cs * delta) * s;
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i)
      if (interior(g, i, j)) CHECK(nut.cells[g.cell_at(i, j)] == doctest::Approx(expected).epsilon(1e-12));

  Rng rng(11);
  CHECK(eddy_viscosity_field(random_vector(g, rng), g, cs, delta).cells.minCoeff() >= 0.0);
}

TEST_CASE("fluid at rest stays at rest") {
  Case c("geometry = cavity\nnu = 0.01\nmu = 0\ndt = 0.01\n");
  const FomSolver solver(c.grid, c.bcs, c.config, 0.0, 0.01);
  FomState s = solver.initial_state();
  for (int n = 0; n < 20; ++n) solver.step(s);
  CHECK(s.u.x.cells.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.u.y.cells.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.p.cells.maxCoeff() - s.p.cells.minCoeff() <= 1e-14);
}

TEST_CASE("uniform flow through an open box is unchanged") {
  Case c("geometry = box\nnu = 0.01\nmu = 1\n");
  const double dt = 0.01;
  const FomSolver solver(c.grid, c.bcs, c.config, 1.0, dt);
  FomState s = solver.initial_state();
  for (int n = 0; n < 50; ++n) solver.step(s);
  CHECK((s.u.x.cells.array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK(s.u.y.cells.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("projection keeps the flow divergence free at every step") {
  Case c("geometry = cavity\nnu = 0.01\nmu = 1\n");
  const double dt = auto_time_step(c.grid, c.config, 1.0);
  const FomSolver solver(c.grid, c.bcs, c.config, 1.0, dt);
  FomState s = solver.initial_state();
  double worst = solver.relative_divergence(s.u);
  for (int n = 0; n < 200; ++n) {
    solver.step(s);
    worst = std::max(worst, solver.relative_divergence(s.u));
  }
  CHECK(worst <= 1e-8);
  CHECK(s.u.x.cells.cwiseAbs().maxCoeff() > 0.01);
}

TEST_CASE("projection works with a pressure outlet") {
  Case c("geometry = step\nnx = 32\nny = 16\nnu = 0.02\nmu = 1\n");
  const double dt = auto_time_step(c.grid, c.config, 1.0);
  const FomSolver solver(c.grid, c.bcs, c.config, 1.0, dt);
  FomState s = solver.initial_state();
  for (int n = 0; n < 100; ++n) {
    solver.step(s);
    CHECK(solver.relative_divergence(s.u) <= 1e-8);
  }
}

TEST_CASE("kinetic energy decays once the lid stops") {
  Case c("geometry = cavity\nnu = 0.01\nmu = 1\n");
  const double dt = auto_time_step(c.grid, c.config, 1.0);
  const FomSolver driven(c.grid, c.bcs, c.config, 1.0, dt);
  FomState s = driven.initial_state();
  for (int n = 0; n < 100; ++n) driven.step(s);
  const FomSolver stopped(c.grid, c.bcs, c.config, 0.0, dt);
  stopped.project(s.u, &s.p);
  double e = stopped.kinetic_energy(s.u);
  CHECK(e > 0.0);
  for (int n = 0; n < 200; ++n) {
    stopped.step(s);
    const double next = stopped.kinetic_energy(s.u);
    CHECK(next <= e);
    e = next;
  }
}

TEST_CASE("CFL violation aborts with a diagnostic") {
  Case c("geometry = cavity\nnu = 0.01\nmu = 1\n");
  const FomSolver solver(c.grid, c.bcs, c.config, 1.0, 0.2);
  FomState s = solver.initial_state();
  try {
    for (int n = 0; n < 10; ++n) solver.step(s);
    FAIL("expected a CFL error");
  } catch (const Error& e) {
    CHECK(e.stage() == Stage::Fom);
    CHECK(std::string(e.what()).find("CFL") != std::string::npos);
  }
}

TEST_CASE("automatic time step respects the stability limits") {
  Case c("geometry = step\nnu = 0.02\nmu = 1\n");
  const double dt = auto_time_step(c.grid, c.config, 1.5);
  const double h = std::min(c.grid.dx(), c.grid.dy());
  CHECK(dt <= c.config.cfl_target * h / (1.5 * c.config.velocity_scale) + 1e-15);
  CHECK(dt * 0.02 * (1 / (c.grid.dx() * c.grid.dx()) + 1 / (c.grid.dy() * c.grid.dy())) <= 0.2 + 1e-12);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(fom_config(Config::from_string("geometry = cavity\nmu = 1\nsave_every = 0\n")), Error);
  CHECK_THROWS_AS(fom_config(Config::from_string("geometry = cavity\nmu = 1, 1\n")), Error);
  CHECK_THROWS_AS(fom_config(Config::from_string("geometry = cavity\nmu = 1\nconvection = spectral\n")), Error);
}

TEST_CASE("snapshot campaign layout, capture and round trip") {
  Config raw = Config::from_string("geometry = cavity\nnx = 8\nny = 8\nnu = 0.01\nmu = 1, 2\nspinup = 0.1\nn_t = 3\nsave_every = 2\n");
  const FomConfig cfg = fom_config(raw);
  std::vector<FomState> captured;
  const SnapshotArchive a = generate_snapshots(cfg, raw, [&](int, int, const FomState& s) { captured.push_back(s); });
  CHECK(a.num_snapshots() == 6);
  CHECK(a.num_samples() == 2);
  CHECK(a.times.size() == 6);
  CHECK(a.sample_of(4) == 1);
  for (int r = 0; r < 6; ++r) {
    CHECK(a.u.col(r) == pack(captured[r].u));
    CHECK(a.p.col(r) == pack(captured[r].p));
    CHECK(a.nut.col(r) == pack(captured[r].nut));
  }
  for (int k = 0; k < 2; ++k) {
    CHECK(a.interval[k] == a.dt[k] * 2);
    CHECK(a.times[k * 3 + 1] - a.times[k * 3] == doctest::Approx(a.interval[k]).epsilon(1e-12));
  }

  const std::string dir = scratch_dir("fom_archive");
  write_archive(dir, a);
  const SnapshotArchive b = read_archive(dir);
  CHECK(b.u == a.u);
  CHECK(b.p == a.p);
  CHECK(b.nut == a.nut);
  CHECK(b.mu == a.mu);
  CHECK(b.dt == a.dt);
  CHECK(b.interval == a.interval);
  CHECK(b.times == a.times);
  CHECK(b.n_t == a.n_t);
  CHECK(b.config.values() == a.config.values());

  const SnapshotArchive again = generate_snapshots(cfg, raw);
  CHECK(again.u == a.u);
  CHECK(again.p == a.p);
  std::filesystem::remove_all(dir);
}

TEST_CASE("steady stop reports samples that never settle") {
  Config raw = Config::from_string("geometry = cavity\nnx = 8\nny = 8\nnu = 0.01\nmu = 1\nspinup = 0.05\nsteady_tol = 1e-12\n");
  CHECK_THROWS_AS(generate_snapshots(fom_config(raw), raw), Error);
}

TEST_CASE("obstacle feels drag and little lift before shedding starts") {
  Case c("geometry = obstacle\nnx = 48\nny = 24\nnu = 0.05\nmu = 1\n");
  const double dt = auto_time_step(c.grid, c.config, 1.0);
  const FomSolver solver(c.grid, c.bcs, c.config, 1.0, dt);
  FomState s = solver.initial_state();
  for (int n = 0; n < 50; ++n) solver.step(s);
  const Vec2 f = solver.force(s);
  CHECK(f.x > 0.0);
  CHECK(std::abs(f.y) < 0.05 * f.x);
  CHECK(solver.lift_coefficient(s) == doctest::Approx(f.y / 0.5).epsilon(1e-12));
}
