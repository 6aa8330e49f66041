#include "mixedrom/workflow.hpp"

#include "mixedrom/error.hpp"
#include "mixedrom/fom.hpp"
#include "mixedrom/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

namespace mixedrom {

namespace fs = std::filesystem;

SnapshotArchive run_generate(const Config& c, std::ostream& log) {
  const FomConfig cfg = fom_config(c);
  log << "generating " << cfg.mu.size() << " samples on " << cfg.geometry.grid.nx << "x" << cfg.geometry.grid.ny
      << " (" << cfg.geometry.preset << ")\n";
  SnapshotArchive ar = generate_snapshots(cfg, c, [&](int sample, int instant, const FomState& s) {
    if (instant == 0) log << "  sample " << sample << " mu=" << cfg.mu[sample] << " window starts at t=" << s.t << "\n";
  });
  if (c.has("archive")) {
    write_archive(c.require_string("archive"), ar);
    log << "archive written to " << c.require_string("archive") << "\n";
  }
  return ar;
}

Model run_offline(const Config& c, std::ostream& log) {
  const std::string dir = c.require_string("model");
  const SnapshotArchive ar = c.get_bool("generate", false) ? run_generate(c, log) : read_archive(c.require_string("archive"));
  const bool existed = fs::exists(dir);
  try {
    Model m = build_model(ar, c);
    write_model(dir, m);
    print_eigen_table(log, m, c.get_int("eigen_rows", 20));
    log << "model written to " << dir << "\n";
    return m;
  } catch (...) {
    std::error_code ec;
    if (!existed) fs::remove_all(dir, ec);
    throw;
  }
}

namespace {

struct Context {
  Geometry geometry;
  StructuredGrid grid;
  BoundarySetup bcs;
  explicit Context(const Config& c) : geometry(make_geometry(c)), grid(geometry.grid), bcs(boundary_setup(grid, geometry)) {}
};

double outlet_pressure(const BoundarySetup& bcs) {
  for (const auto& p : bcs.patches)
    if (p.pressure == BcKind::Dirichlet) return p.pressure_value;
  return 0.0;
}

int reference_sample(const SnapshotArchive& ref, double mu) {
  for (int k = 0; k < ref.num_samples(); ++k)
    if (std::abs(ref.mu[k] - mu) <= 1e-12 * std::max(1.0, std::abs(mu))) return k;
  throw Error(Stage::Config, "reference archive has no sample at mu=" + format_doubles({mu}));
}

RomState blend(const RomState& a, const RomState& b, double w) {
  RomState s = a;
  s.a = (1 - w) * a.a + w * b.a;
  s.b = (1 - w) * a.b + w * b.b;
  s.g = (1 - w) * a.g + w * b.g;
  s.gbar = (1 - w) * a.gbar + w * b.gbar;
  s.t = (1 - w) * a.t + w * b.t;
  return s;
}

// Trajectory state at time t by linear interpolation of the coefficients.
RomState state_at(const Trajectory& tr, double t) {
  const auto& st = tr.states;
  if (t <= st.front().t) return st.front();
  if (t >= st.back().t) return st.back();
  const auto it = std::lower_bound(st.begin(), st.end(), t, [](const RomState& s, double v) { return s.t < v; });
  const auto hi = static_cast<size_t>(it - st.begin());
  const RomState& b = st[hi];
  const RomState& a = st[hi - 1];
  return blend(a, b, (t - a.t) / (b.t - a.t));
}

double mismatch(const Context& ctx, const Eigen::VectorXd& u, double mu) {
  const VectorField rom = unpack_vector(ctx.grid, u);
  VectorField exact(ctx.grid);
  apply_velocity_trace(ctx.grid, ctx.bcs, mu, exact);
  VectorField diff(ctx.grid);
  diff.x.trace = rom.x.trace - exact.x.trace;
  diff.y.trace = rom.y.trace - exact.y.trace;
  double num = 0.0, den = 0.0;
  for (size_t p = 0; p < ctx.bcs.patches.size(); ++p) {
    const auto& b = ctx.bcs.patches[p];
    if (b.velocity != BcKind::Dirichlet || !b.parametrized) continue;
    const std::string& name = ctx.grid.patches()[p].name;
    num += boundary_product(diff, diff, name, ctx.grid);
    den += boundary_product(exact, exact, name, ctx.grid);
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

QueryOptions query_options(const Model& m, const Config& c) {
  QueryOptions q;
  q.mu = c.get_double("mu_star", std::numeric_limits<double>::quiet_NaN());
  if (!std::isfinite(q.mu)) throw Error(Stage::Config, "mu_star is required");
  const std::string steady = c.get_string("steady", "auto");
  q.steady = steady == "auto" ? m.n_t == 1 : c.get_bool("steady", false);
  const double window = m.times.empty() ? 0.0 : m.times[static_cast<size_t>(m.n_t - 1)] - m.times.front();
  q.rom.t_final = c.get_double("t_final", window);
  q.rom.tau = c.get_double("tau", 1e4);
  q.rom.tol = c.get_double("newton_tol", 1e-10);
  q.rom.max_iter = c.get_int("max_iter", 50);
  if (c.has("rom_dt")) {
    q.rom.dt = c.get_double("rom_dt", 0.0);
  } else {
    Config fc = m.config;
    fc.set("mu", format_doubles({q.mu}));
    const FomConfig cfg = fom_config(fc);
    q.rom.dt = cfg.dt > 0 ? cfg.dt : auto_time_step(StructuredGrid(cfg.geometry.grid), cfg, q.mu);
  }
  return q;
}

QueryResult run_query(const Model& m, const OnlineSetup& o, const QueryOptions& q, const SnapshotArchive* ref) {
  const Context ctx(m.config);
  const ReducedSystem& s = o.system;
  QueryResult r;
  r.mu = q.mu;
  r.steady = q.steady;
  const auto [lo, hi] = std::minmax_element(m.mu.begin(), m.mu.end());
  r.outside_training_range = q.mu < *lo || q.mu > *hi;

  BoundaryData bd;
  bd.u_bc = bc_values(ctx.bcs, q.mu);
  bd.p_out = outlet_pressure(ctx.bcs);

  const Eigen::VectorXd x0 = initial_condition(q.mu, o.initial);
  RomState init;
  init.mu = q.mu;
  init.t = 0.0;
  init.a = x0.head(s.n());
  init.b = x0.segment(s.n(), s.n_p);
  if (q.steady) {
    // start from the projection of the nearest training sample's last instant
    int nearest = 0;
    for (int k = 1; k < m.num_samples(); ++k)
      if (std::abs(m.mu[k] - q.mu) < std::abs(m.mu[nearest] - q.mu)) nearest = k;
    const Eigen::VectorXd row = o.snapshot_coeffs.row((nearest + 1) * m.n_t - 1).transpose();
    init.a = row.head(s.n());
    init.b = row.segment(s.n(), s.n_p);
    RomState st = steady_solve(s, o.viscosity, init, bd, q.rom);
    r.trajectory.states.push_back(st);
    const Eigen::VectorXd af = full_velocity(s, st.a, bd);
    r.trajectory.divergence.push_back(s.n_p > 0 && af.norm() > 0 ? (s.P * af).norm() / af.norm() : 0.0);
  } else {
    r.trajectory = run_unsteady(s, o.viscosity, init, bd, q.rom);
  }

  const RomState& last = r.trajectory.states.back();
  r.inlet_mismatch = mismatch(ctx, reconstruct_fields(s, o.basis, last, bd).u, q.mu);

  const bool has_force = s.delta.rows() > 0;
  if (has_force) {
    for (const auto& st : r.trajectory.states) {
      const Eigen::Vector2d f = reduced_force(full_velocity(s, st.a, bd), full_pressure(s, st.b, bd), s.delta, s.theta);
      r.lift.t.push_back(st.t);
      // the reduced force uses fluid-outward normals; the body feels its negative
      r.lift.cl.push_back(lift_coefficient(-f.y(), m.config.get_double("rho", 1.0), q.mu, ctx.geometry.d_ref));
    }
  }

  if (ref) {
    const int k = reference_sample(*ref, q.mu);
    if (ref->u.rows() != o.basis.velocity.rows()) throw Error(Stage::Config, "reference archive grid does not match the model");
    const Eigen::VectorXd wv = vector_weights(ctx.grid);
    const Eigen::VectorXd ws = scalar_weights(ctx.grid);
    const double t0 = ref->times[static_cast<size_t>(k * ref->n_t)];
    for (int l = 0; l < ref->n_t; ++l) {
      const int col = k * ref->n_t + l;
      const double t = ref->times[static_cast<size_t>(col)] - t0;
      if (!q.steady && t > last.t + 1e-9) break;
      const RomState st = q.steady ? last : state_at(r.trajectory, t);
      const ReconstructedFields f = reconstruct_fields(s, o.basis, st, bd);
      r.ref_times.push_back(t);
      r.eps_u.push_back(relative_error(ref->u.col(col), f.u, wv));
      r.eps_p.push_back(relative_error(ref->p.col(col), f.p, ws));
    }
    if (q.steady && ref->n_t > 1) {
      // steady comparison against the final instant only
      r.ref_times = {r.ref_times.back()};
      r.eps_u = {r.eps_u.back()};
      r.eps_p = {r.eps_p.back()};
    }
    for (size_t i = 0; i < r.eps_u.size(); ++i) {
      r.mean_eps_u += r.eps_u[i] / static_cast<double>(r.eps_u.size());
      r.mean_eps_p += r.eps_p[i] / static_cast<double>(r.eps_p.size());
    }
    if (has_force && ref->lift.rows() > 0) {
      for (Eigen::Index row = 0; row < ref->lift.rows(); ++row) {
        r.ref_lift.t.push_back(ref->lift(row, 2 * k) - t0);
        r.ref_lift.cl.push_back(ref->lift(row, 2 * k + 1));
      }
    }
  }
  return r;
}

namespace {

void write_csv_outputs(const std::string& dir, const ReducedSystem& s, const QueryResult& r) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir + "/coefficients.csv");
    out << "t [s]";
    for (int i = 0; i < s.n(); ++i) out << ",a" << i + 1 << " [m/s]";
    for (int i = 0; i < s.n_p; ++i) out << ",b" << i + 1 << " [m^2/s^2]";
    for (int i = 0; i < s.n_nut; ++i) out << ",g" << i + 1 << " [m^2/s]";
    out << ",divergence_ratio [-]\n";
    char buf[32];
    for (size_t k = 0; k < r.trajectory.states.size(); ++k) {
      const RomState& st = r.trajectory.states[k];
      std::snprintf(buf, sizeof(buf), "%.17g", st.t);
      out << buf;
      auto put = [&](const Eigen::VectorXd& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          std::snprintf(buf, sizeof(buf), ",%.17g", v[i]);
          out << buf;
        }
      };
      put(st.a);
      put(st.b);
      put(st.g);
      std::snprintf(buf, sizeof(buf), ",%.17g\n", r.trajectory.divergence[k]);
      out << buf;
    }
    if (!out) throw Error(Stage::Io, "cannot write " + dir + "/coefficients.csv");
  }
  if (!r.eps_u.empty()) {
    std::ofstream out(dir + "/errors.csv");
    out << "t [s],eps_u [%],eps_p [%]\n";
    for (size_t k = 0; k < r.eps_u.size(); ++k) out << r.ref_times[k] << "," << r.eps_u[k] << "," << r.eps_p[k] << "\n";
  }
  if (!r.lift.t.empty()) {
    std::ofstream out(dir + "/lift.csv");
    out << "t [s],cl_rom [-]\n";
    out.precision(12);
    for (size_t k = 0; k < r.lift.t.size(); ++k) out << r.lift.t[k] << "," << r.lift.cl[k] << "\n";
  }
  if (!r.ref_lift.t.empty()) {
    std::ofstream out(dir + "/lift_reference.csv");
    out << "t [s],cl_fom [-]\n";
    out.precision(12);
    for (size_t k = 0; k < r.ref_lift.t.size(); ++k) out << r.ref_lift.t[k] << "," << r.ref_lift.cl[k] << "\n";
  }
}

struct LiftSummary {
  bool valid = false;
  double eps_cl = 0.0, ref_period = 0.0, rom_period = 0.0;
};

LiftSummary summarize_lift(const QueryResult& r) {
  LiftSummary out;
  if (r.steady || r.ref_lift.t.size() < 3 || r.lift.t.size() < 3) return out;
  const double t1 = std::max(r.ref_lift.t.front(), r.lift.t.front());
  const double t2 = std::min(r.ref_lift.t.back(), r.lift.t.back());
  out.eps_cl = lift_curve_error(r.ref_lift, r.lift, t1, t2);
  try {
    const PeakComparison pk = peak_and_period(r.ref_lift, r.lift, t1, t2);
    out.ref_period = pk.ref_period;
    out.rom_period = pk.rom_period;
    out.valid = true;
  } catch (const Error&) {
    out.valid = false;
  }
  return out;
}

}  // namespace

QueryResult run_online(const Config& c, std::ostream& log) {
  const Model m = load_model(c.require_string("model"));
  const QueryOptions q = query_options(m, c);
  const OnlineSetup o = prepare_online(m, mode_counts(c), q.rom.dt);
  SnapshotArchive ref;
  const bool has_ref = c.has("reference");
  if (has_ref) ref = read_archive(c.require_string("reference"));
  const QueryResult r = run_query(m, o, q, has_ref ? &ref : nullptr);
  if (r.outside_training_range)
    log << "warning: mu_star=" << q.mu << " lies outside the training range; interpolants are clamped\n";
  const ReducedSystem& s = o.system;
  log << (q.steady ? "steady" : "unsteady") << " solve at mu=" << q.mu << " with n_u=" << s.n_u << " n_s=" << s.n_s
      << " n_p=" << s.n_p << " n_nut=" << s.n_nut << "\n";
  if (has_ref) log << "mean eps_u = " << r.mean_eps_u << " %, mean eps_p = " << r.mean_eps_p << " %\n";
  const LiftSummary ls = summarize_lift(r);
  if (ls.valid)
    log << "eps_CL = " << ls.eps_cl << " %, period FOM " << ls.ref_period << ", ROM " << ls.rom_period << "\n";
  if (c.has("output")) {
    const std::string dir = c.require_string("output");
    write_csv_outputs(dir, s, r);
    Config sum;
    sum.set("mu_star", format_doubles({q.mu}));
    sum.set("mode", q.steady ? "steady" : "unsteady");
    sum.set("bc_mode", m.bc_mode == BcMode::Penalty ? "penalty" : "lifting");
    sum.set("n_u", std::to_string(s.n_u));
    sum.set("n_s", std::to_string(s.n_s));
    sum.set("n_p", std::to_string(s.n_p));
    sum.set("n_nut", std::to_string(s.n_nut));
    sum.set("rom_dt", format_doubles({q.rom.dt}));
    sum.set("tau", format_doubles({q.rom.tau}));
    sum.set("states", std::to_string(r.trajectory.states.size()));
    sum.set("outside_training_range", r.outside_training_range ? "1" : "0");
    sum.set("inlet_mismatch", format_doubles({r.inlet_mismatch}));
    sum.set("max_divergence_ratio",
            format_doubles({*std::max_element(r.trajectory.divergence.begin(), r.trajectory.divergence.end())}));
    if (has_ref) {
      sum.set("mean_eps_u_percent", format_doubles({r.mean_eps_u}));
      sum.set("mean_eps_p_percent", format_doubles({r.mean_eps_p}));
    }
    if (ls.valid) {
      sum.set("eps_cl_percent", format_doubles({ls.eps_cl}));
      sum.set("period_fom", format_doubles({ls.ref_period}));
      sum.set("period_rom", format_doubles({ls.rom_period}));
    }
    std::ofstream out(dir + "/summary.txt");
    out << sum.to_text();
    if (!out) throw Error(Stage::Io, "cannot write " + dir + "/summary.txt");
    log << "outputs written to " << dir << "\n";
  }
  return r;
}

std::vector<TauRow> run_tau_sweep(const Config& c, std::ostream& log) {
  const Model m = load_model(c.require_string("model"));
  if (m.bc_mode != BcMode::Penalty) throw Error(Stage::Config, "tau sweep needs a penalty-mode model");
  QueryOptions q = query_options(m, c);
  q.steady = true;
  const OnlineSetup o = prepare_online(m, mode_counts(c), q.rom.dt);
  SnapshotArchive ref;
  const bool has_ref = c.has("reference");
  if (has_ref) ref = read_archive(c.require_string("reference"));
  std::vector<double> taus = c.has("taus") ? c.get_doubles("taus") : std::vector<double>{1e2, 1e4, 1e6};
  std::vector<TauRow> rows;
  log << "tau,inlet_mismatch [-],eps_u [%],eps_p [%]\n";
  for (double tau : taus) {
    q.rom.tau = tau;
    const QueryResult r = run_query(m, o, q, has_ref ? &ref : nullptr);
    rows.push_back({tau, r.inlet_mismatch, r.mean_eps_u, r.mean_eps_p});
    log << tau << "," << r.inlet_mismatch << "," << r.mean_eps_u << "," << r.mean_eps_p << "\n";
  }
  if (c.has("output")) {
    fs::create_directories(c.require_string("output"));
    std::ofstream out(c.require_string("output") + "/tau_sweep.csv");
    out << "tau [-],inlet_mismatch [-],eps_u [%],eps_p [%]\n";
    out.precision(12);
    for (const auto& row : rows) out << row.tau << "," << row.inlet_mismatch << "," << row.eps_u << "," << row.eps_p << "\n";
  }
  return rows;
}

std::vector<ModeRow> run_mode_sweep(const Config& c, std::ostream& log) {
  const Model m = load_model(c.require_string("model"));
  const SnapshotArchive ref = read_archive(c.require_string("reference"));
  std::vector<double> modes = c.has("modes") ? c.get_doubles("modes") : std::vector<double>{2, 4, 6, 8};
  QueryOptions q = query_options(m, [&] {
    Config probe = c;
    if (!probe.has("mu_star")) probe.set("mu_star", format_doubles({ref.mu.front()}));
    return probe;
  }());
  std::vector<ModeRow> rows;
  log << "modes,mean_eps_u [%],mean_eps_p [%]\n";
  for (double md : modes) {
    const int n = static_cast<int>(md);
    ModeCounts counts;
    counts.n_u = n;
    counts.n_s = n;
    counts.n_p = n;
    counts.n_nut = std::min<int>(n, static_cast<int>(m.basis.viscosity.cols()));
    const OnlineSetup o = prepare_online(m, counts, q.rom.dt);
    ModeRow row;
    row.modes = n;
    for (double mu : ref.mu) {
      q.mu = mu;
      const QueryResult r = run_query(m, o, q, &ref);
      row.eps_u.push_back(r.mean_eps_u);
      row.eps_p.push_back(r.mean_eps_p);
    }
    for (size_t k = 0; k < row.eps_u.size(); ++k) {
      row.mean_eps_u += row.eps_u[k] / static_cast<double>(row.eps_u.size());
      row.mean_eps_p += row.eps_p[k] / static_cast<double>(row.eps_p.size());
    }
    log << n << "," << row.mean_eps_u << "," << row.mean_eps_p << "\n";
    rows.push_back(std::move(row));
  }
  if (c.has("output")) {
    fs::create_directories(c.require_string("output"));
    std::ofstream out(c.require_string("output") + "/mode_sweep.csv");
    out << "modes [-],mean_eps_u [%],mean_eps_p [%]\n";
    out.precision(12);
    for (const auto& row : rows) out << row.modes << "," << row.mean_eps_u << "," << row.mean_eps_p << "\n";
  }
  return rows;
}

}  // namespace mixedrom
