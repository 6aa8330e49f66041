#pragma once

#include "mixedrom/config.hpp"
#include "mixedrom/grid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

namespace mixedrom::testing {

inline StructuredGrid rect_grid(int nx, int ny, double lx = 1.0, double ly = 1.0) {
  GridSpec s;
  s.nx = nx;
  s.ny = ny;
  s.lx = lx;
  s.ly = ly;
  return StructuredGrid(s);
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  Eigen::VectorXd vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform();
    return v;
  }
  Eigen::MatrixXd matrix(Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j) m.col(j) = vector(r);
    return m;
  }
};

inline ScalarField random_scalar(const StructuredGrid& g, Rng& rng) {
  ScalarField f(g);
  f.cells = rng.vector(g.num_cells());
  f.trace = rng.vector(g.num_boundary_faces());
  return f;
}

inline VectorField random_vector(const StructuredGrid& g, Rng& rng) {
  VectorField f;
  f.x = random_scalar(g, rng);
  f.y = random_scalar(g, rng);
  return f;
}

/// Cell values and face-centre traces of an analytic function.
template <typename F>
ScalarField sample(const StructuredGrid& g, F&& f) {
  ScalarField s(g);
  for (int c = 0; c < g.num_cells(); ++c) s.cells[c] = f(g.centre(c).x, g.centre(c).y);
  for (int k = 0; k < g.num_boundary_faces(); ++k) {
    const auto& bf = g.boundary_faces()[k];
    s.trace[k] = f(bf.centre.x, bf.centre.y);
  }
  return s;
}

/// True when the cell at lattice (i, j) has all four neighbours in the grid.
inline bool interior(const StructuredGrid& g, int i, int j) {
  return g.cell_at(i - 1, j) >= 0 && g.cell_at(i + 1, j) >= 0 && g.cell_at(i, j - 1) >= 0 && g.cell_at(i, j + 1) >= 0;
}

inline std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mixedrom_test_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

/// Lid-driven cavity campaign: M = 2 samples, N_T = 5 instants on a 16 x 8 grid.
inline Config tiny_campaign() {
  return Config::from_string(
      "geometry = cavity\n"
      "nx = 16\n"
      "ny = 8\n"
      "nu = 0.01\n"
      "mu = 1.0, 1.5\n"
      "dt = auto\n"
      "spinup = 0.5\n"
      "n_t = 5\n"
      "save_every = 10\n");
}

}  // namespace mixedrom::testing
