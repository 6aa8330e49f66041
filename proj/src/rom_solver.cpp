#include "mixedrom/rom_solver.hpp"

#include "mixedrom/error.hpp"

#include <cmath>
#include <sstream>

namespace mixedrom {

Eigen::VectorXd full_velocity(const ReducedSystem& s, const Eigen::VectorXd& a, const BoundaryData& bd) {
  if (a.size() != s.n()) throw Error(Stage::Solver, "velocity coefficient count mismatch");
  Eigen::VectorXd x(s.n() + s.n_lift);
  x.head(s.n()) = a;
  if (s.n_lift > 0) {
    if (bd.u_bc.size() != s.n_lift) throw Error(Stage::Solver, "boundary value count does not match lifting modes");
    x.tail(s.n_lift) = bd.u_bc;
  }
  return x;
}

Eigen::VectorXd full_pressure(const ReducedSystem& s, const Eigen::VectorXd& b, const BoundaryData& bd) {
  if (b.size() != s.n_p) throw Error(Stage::Solver, "pressure coefficient count mismatch");
  Eigen::VectorXd y(s.n_p + s.n_pc);
  y.head(s.n_p) = b;
  if (s.n_pc > 0) y.tail(s.n_pc).setConstant(bd.p_out);
  return y;
}

Eigen::VectorXd velocity_inputs(const ViscosityModel& vm, const Eigen::VectorXd& a) {
  if (vm.input_map.size() == 0) return a.head(vm.n_u);
  if (vm.input_map.cols() != a.size()) throw Error(Stage::Solver, "velocity input map does not match coefficients");
  return vm.input_map * a;
}

void evaluate_viscosity_coeffs(RomState& st, const std::deque<Eigen::VectorXd>& history, double dt,
                               const ViscosityModel& vm) {
  if (vm.has_rbf()) {
    if (vm.mode == GMode::TimeParameter) {
      Eigen::VectorXd z(vm.rbf.dim());
      z[0] = st.mu;
      if (z.size() > 1) z[1] = st.t;
      st.g = vm.rbf.eval(z);
    } else {
      const Eigen::VectorXd a = velocity_inputs(vm, st.a);
      Eigen::VectorXd adot = Eigen::VectorXd::Zero(vm.n_u);
      if (!history.empty()) {
        const int back = std::min<int>(vm.lag, static_cast<int>(history.size()));
        const Eigen::VectorXd& old = history[history.size() - back];
        adot = (a - old) / (back * dt);
      }
      Eigen::VectorXd z(2 * vm.n_u);
      z << a, adot;
      st.g = vm.rbf.eval(z);
    }
  } else {
    st.g.resize(0);
  }
  if (vm.split) st.gbar = vm.mean.eval(st.mu);
  else st.gbar.resize(0);
}

namespace {

// nu (B + BT) + g^T CT + gbar^T CT_mean, as an n x (n + n_lift) matrix.
Eigen::MatrixXd linear_operator(const ReducedSystem& s, const RomState& st) {
  Eigen::MatrixXd a = s.nu * (s.B + s.BT);
  if (st.g.size() != s.n_nut || st.gbar.size() != s.n_mean)
    throw Error(Stage::Solver, "viscosity coefficient count mismatch");
  for (int i = 0; i < s.n(); ++i) {
    if (s.n_nut > 0) a.row(i) += st.g.transpose() * s.CT[i];
    if (s.n_mean > 0) a.row(i) += st.gbar.transpose() * s.CT_mean[i];
  }
  return a;
}

struct Problem {
  const ReducedSystem& s;
  const BoundaryData& bd;
  double tau;
  double dt;                    // 0 for the steady system
  Eigen::VectorXd prev_full;    // previous full velocity (unsteady)
  std::function<void(RomState&)> update_g;
};

Eigen::VectorXd residual(const Problem& pb, RomState& st, const Eigen::VectorXd& x) {
  const ReducedSystem& s = pb.s;
  st.a = x.head(s.n());
  st.b = x.tail(s.n_p);
  pb.update_g(st);
  Eigen::VectorXd r(s.n() + s.n_p);
  const Eigen::VectorXd f = momentum_forcing(s, st, pb.bd, pb.tau);
  if (pb.dt > 0) {
    const Eigen::VectorXd af = full_velocity(s, st.a, pb.bd);
    r.head(s.n()) = s.M * (af - pb.prev_full) / pb.dt - f;
  } else {
    r.head(s.n()) = -f;
  }
  r.tail(s.n_p) = s.P * full_velocity(s, st.a, pb.bd);
  return r;
}

Eigen::MatrixXd jacobian(const Problem& pb, const RomState& st) {
  const ReducedSystem& s = pb.s;
  const int n = s.n();
  const Eigen::VectorXd af = full_velocity(s, st.a, pb.bd);
  // dF/da
  Eigen::MatrixXd dfa = linear_operator(s, st).leftCols(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd grad = (s.C[i] + s.C[i].transpose()) * af;
    dfa.row(i) -= grad.head(n).transpose();
  }
  if (s.penalty())
    for (const auto& e : s.E) dfa -= pb.tau * e;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n + s.n_p, n + s.n_p);
  j.topLeftCorner(n, n) = (pb.dt > 0 ? Eigen::MatrixXd(s.M.leftCols(n) / pb.dt) : Eigen::MatrixXd::Zero(n, n)) - dfa;
  j.topRightCorner(n, s.n_p) = s.H.leftCols(s.n_p);
  j.bottomLeftCorner(s.n_p, n) = s.P.leftCols(n);
  return j;
}

RomState newton(const Problem& pb, RomState st, const RomOptions& o, NewtonReport* report) {
  const ReducedSystem& s = pb.s;
  const int n = s.n();
  Eigen::VectorXd x(n + s.n_p);
  x << st.a, st.b;
  RomState probe = st;
  const double reference = residual(pb, probe, Eigen::VectorXd::Zero(x.size())).norm();
  const double target = o.tol * (1.0 + reference);
  Eigen::VectorXd r = residual(pb, st, x);
  double rn = r.norm();
  int it = 0;
  for (; it <= o.max_iter && rn > target; ++it) {
    if (it == o.max_iter) break;
    if (!std::isfinite(rn)) break;
    const Eigen::MatrixXd jac = jacobian(pb, st);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) {
      std::ostringstream msg;
      msg << "singular Jacobian at t=" << st.t << " (iteration " << it << ", residual " << rn << ")";
      throw Error(Stage::Solver, msg.str());
    }
    const Eigen::VectorXd dx = lu.solve(-r);
    double lambda = 1.0;
    Eigen::VectorXd xt;
    Eigen::VectorXd rt;
    RomState trial = st;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      xt = x + lambda * dx;
      rt = residual(pb, trial, xt);
      if (std::isfinite(rt.norm()) && rt.norm() < rn) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
    x = xt;
    r = rt;
    rn = rt.norm();
    st = trial;
  }
  if (report) *report = {it, rn, reference};
  if (!(rn <= target)) {
    std::ostringstream msg;
    msg << "Newton did not converge at t=" << st.t << ": residual " << rn << " after " << it
        << " iterations (target " << target << ")";
    throw Error(Stage::Solver, msg.str());
  }
  return st;
}

}  // namespace

Eigen::VectorXd momentum_forcing(const ReducedSystem& s, const RomState& st, const BoundaryData& bd, double tau) {
  const Eigen::VectorXd af = full_velocity(s, st.a, bd);
  const Eigen::VectorXd bf = full_pressure(s, st.b, bd);
  Eigen::VectorXd f = linear_operator(s, st) * af - s.H * bf;
  for (int i = 0; i < s.n(); ++i) f[i] -= af.dot(s.C[i] * af);
  if (s.penalty()) {
    if (bd.u_bc.size() != s.D.cols()) throw Error(Stage::Solver, "boundary value count does not match penalty terms");
    f += tau * s.D * bd.u_bc;
    for (const auto& e : s.E) f -= tau * e * st.a;
  }
  return f;
}

RomState unsteady_step(const ReducedSystem& s, const ViscosityModel& vm, const RomState& state,
                       const std::deque<Eigen::VectorXd>& history, const BoundaryData& bd, const RomOptions& o,
                       NewtonReport* report) {
  if (!(o.dt > 0)) throw Error(Stage::Solver, "time step must be positive");
  const double t_new = state.t + o.dt;
  Problem pb{s, bd, o.tau, o.dt, full_velocity(s, state.a, bd),
             [&](RomState& st) {
               st.t = t_new;
               evaluate_viscosity_coeffs(st, history, o.dt, vm);
             }};
  RomState guess = state;
  guess.t = t_new;
  return newton(pb, guess, o, report);
}

RomState steady_solve(const ReducedSystem& s, const ViscosityModel& vm, const RomState& guess, const BoundaryData& bd,
                      const RomOptions& o, NewtonReport* report) {
  const std::deque<Eigen::VectorXd> none;
  Problem pb{s, bd, o.tau, 0.0, Eigen::VectorXd(),
             [&](RomState& st) { evaluate_viscosity_coeffs(st, none, 1.0, vm); }};
  return newton(pb, guess, o, report);
}

Trajectory run_unsteady(const ReducedSystem& s, const ViscosityModel& vm, const RomState& initial,
                        const BoundaryData& bd, const RomOptions& o) {
  if (!(o.dt > 0)) throw Error(Stage::Solver, "time step must be positive");
  const long steps = std::lround((o.t_final - initial.t) / o.dt);
  Trajectory tr;
  std::deque<Eigen::VectorXd> history;
  RomState st = initial;
  evaluate_viscosity_coeffs(st, history, o.dt, vm);
  auto diag = [&](const RomState& x) {
    const Eigen::VectorXd af = full_velocity(s, x.a, bd);
    const double an = af.norm();
    return s.n_p > 0 && an > 0 ? (s.P * af).norm() / an : 0.0;
  };
  tr.states.push_back(st);
  tr.divergence.push_back(diag(st));
  for (long k = 0; k < steps; ++k) {
    history.push_back(velocity_inputs(vm, st.a));
    while (static_cast<int>(history.size()) > std::max(vm.lag, 1)) history.pop_front();
    st = unsteady_step(s, vm, st, history, bd, o);
    if (!st.a.allFinite()) throw Error(Stage::Solver, "non-finite coefficients at t=" + std::to_string(st.t));
    tr.states.push_back(st);
    tr.divergence.push_back(diag(st));
  }
  return tr;
}

Eigen::VectorXd initial_condition(double mu, const LinearTable& table) { return table.eval(mu); }

ReconstructedFields reconstruct_fields(const ReducedSystem& s, const ReducedBasis& basis, const RomState& st,
                                       const BoundaryData& bd) {
  if (basis.velocity.cols() != s.n() + s.n_lift || basis.pressure.cols() != s.n_p + s.n_pc)
    throw Error(Stage::Solver, "basis does not match reduced system");
  ReconstructedFields f;
  f.u = basis.velocity * full_velocity(s, st.a, bd);
  f.p = basis.pressure * full_pressure(s, st.b, bd);
  f.nut = Eigen::VectorXd::Zero(basis.velocity.rows() / 2);
  if (basis.viscosity.cols() > 0 && st.g.size() == basis.viscosity.cols()) f.nut = basis.viscosity * st.g;
  if (basis.mean_viscosity.cols() > 0 && st.gbar.size() == basis.mean_viscosity.cols())
    f.nut += basis.mean_viscosity * st.gbar;
  return f;
}

}  // namespace mixedrom
