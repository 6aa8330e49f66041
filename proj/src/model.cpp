#include "mixedrom/model.hpp"

#include "mixedrom/error.hpp"
#include "mixedrom/fom.hpp"
#include "mixedrom/matrix_io.hpp"
#include "mixedrom/pod.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace mixedrom {

namespace {

// Keys naming output locations; kept out of the model so the directory does
// not depend on where it was written from.
bool is_path_key(const std::string& k) {
  return k == "archive" || k == "model" || k == "output" || k == "reference";
}

double outlet_pressure(const BoundarySetup& bcs) {
  for (const auto& p : bcs.patches)
    if (p.pressure == BcKind::Dirichlet) return p.pressure_value;
  return 0.0;
}

std::vector<Eigen::Index> range(Eigen::Index from, Eigen::Index count) {
  std::vector<Eigen::Index> r;
  for (Eigen::Index k = 0; k < count; ++k) r.push_back(from + k);
  return r;
}

std::vector<Eigen::Index> concat(std::vector<Eigen::Index> a, const std::vector<Eigen::Index>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Eigen::MatrixXd take(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows,
                     const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
  return out;
}

Eigen::MatrixXd take_cols(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(cols[j]);
  return out;
}

}  // namespace

Model build_model(const SnapshotArchive& ar, const Config& opt) {
  Model m;
  for (const auto& [k, v] : ar.config.values())
    if (!is_path_key(k)) m.config.set(k, v);
  for (const auto& [k, v] : opt.values())
    if (!is_path_key(k)) m.config.set(k, v);
  const Config& c = m.config;

  const Geometry geo = make_geometry(c);
  const StructuredGrid grid(geo.grid);
  const BoundarySetup bcs = boundary_setup(grid, geo);
  if (ar.u.rows() != vector_size(grid) || ar.p.rows() != scalar_size(grid) || ar.nut.rows() != scalar_size(grid))
    throw Error(Stage::Pod, "archive fields do not match the configured grid");
  const int ns = ar.num_snapshots();
  m.n_t = ar.n_t;
  m.mu = ar.mu;
  m.dt = ar.dt;
  m.interval = ar.interval;
  m.times = ar.times;

  const std::string bc = c.get_string("bc_mode", "auto");
  if (bc == "auto") m.bc_mode = m.n_t == 1 ? BcMode::Penalty : BcMode::Lifting;
  else if (bc == "penalty") m.bc_mode = BcMode::Penalty;
  else if (bc == "lifting") m.bc_mode = BcMode::Lifting;
  else throw Error(Stage::Config, "bc_mode must be auto, penalty or lifting");
  const std::string gm = c.get_string("g_mode", "auto");
  if (gm == "auto") m.g_mode = m.n_t > 1 ? GMode::VelocityCoefficient : GMode::TimeParameter;
  else if (gm == "time") m.g_mode = GMode::TimeParameter;
  else if (gm == "velocity") m.g_mode = GMode::VelocityCoefficient;
  else throw Error(Stage::Config, "g_mode must be auto, time or velocity");
  if (m.g_mode == GMode::VelocityCoefficient && m.n_t < 2)
    throw Error(Stage::Config, "velocity-coefficient g_mode needs at least two instants per sample");
  const std::string sp = c.get_string("viscosity_split", "auto");
  m.split = sp == "auto" ? m.n_t > 1 : c.get_bool("viscosity_split", false);
  if (m.split && m.n_t < 2) throw Error(Stage::Config, "viscosity_split needs at least two instants per sample");

  const int max_modes = c.get_int("max_modes", 20);
  const int max_u = c.get_int("max_u", max_modes);
  const int max_p = c.get_int("max_p", max_modes);
  const int max_nut = c.get_int("max_nut", max_modes);

  // boundary values per snapshot
  const auto list = scalar_bcs(bcs);
  Eigen::MatrixXd u_bc(static_cast<Eigen::Index>(list.size()), ns);
  for (int r = 0; r < ns; ++r) u_bc.col(r) = bc_values(bcs, ar.mu[ar.sample_of(r)]);
  const double p_out = outlet_pressure(bcs);

  Eigen::MatrixXd su = ar.u, sp_ = ar.p;
  LiftingFunctions lifting;
  if (m.bc_mode == BcMode::Lifting) {
    lifting = build_lifting_functions(grid, bcs);
    const Homogenized h = homogenize(ar.u, ar.p, lifting, u_bc, Eigen::VectorXd::Constant(ns, p_out));
    su = h.u;
    sp_ = h.p;
  }
  const Eigen::VectorXd wv = vector_weights(grid);
  const Eigen::VectorXd ws = scalar_weights(grid);

  const PodResult pu = pod(su, wv, max_u);
  if (pu.modes.cols() == 0) throw Error(Stage::Pod, "velocity snapshots have zero rank");
  const PodResult pp = pod(sp_, ws, max_p);
  const int max_s = c.get_int("max_s", static_cast<int>(pp.modes.cols()));
  const int n_s = std::min<int>(max_s, static_cast<int>(pp.modes.cols()));
  const Eigen::MatrixXd sup = supremizer_modes(pp.modes.leftCols(n_s), grid, bcs);

  Eigen::MatrixXd nut_target = ar.nut;
  MeanViscosity mv;
  if (m.split) {
    mv = mean_viscosity_fields(ar.nut, m.n_t);
    nut_target = mv.fluctuations;
  }
  const PodResult pn = pod(nut_target, ws, max_nut);

  m.eig_u = pu.eigenvalues;
  m.eig_p = pp.eigenvalues;
  m.eig_nut = pn.eigenvalues;
  m.rank_u = pu.rank;
  m.rank_p = pp.rank;
  m.rank_nut = pn.rank;

  ReducedBasis& b = m.basis;
  b.n_u = static_cast<int>(pu.modes.cols());
  b.n_s = n_s;
  b.n_lift = m.bc_mode == BcMode::Lifting ? static_cast<int>(list.size()) : 0;
  b.n_p = static_cast<int>(pp.modes.cols());
  b.n_pc = m.bc_mode == BcMode::Lifting && has_pressure_dirichlet(bcs) ? 1 : 0;
  b.velocity.resize(vector_size(grid), b.n_velocity());
  b.velocity << pu.modes, sup, (b.n_lift ? lifting.velocity : Eigen::MatrixXd(vector_size(grid), 0));
  b.pressure.resize(scalar_size(grid), b.n_pressure());
  if (b.n_pc) b.pressure << pp.modes, lifting.pressure;
  else b.pressure = pp.modes;
  b.viscosity = pn.modes;
  b.mean_viscosity = m.split ? mv.means : Eigen::MatrixXd(scalar_size(grid), 0);

  assemble_linear(b, grid, m.ops);
  assemble_convection(b, grid, m.ops);
  assemble_turbulence(b, grid, m.ops);
  if (m.bc_mode == BcMode::Penalty) assemble_penalty(b, grid, bcs, m.ops);
  else {
    m.ops.D.resize(b.n_velocity(), 0);
    m.ops.E.clear();
  }
  ForceOptions fo;
  fo.patch = geo.force_patch;
  fo.mu_dyn = c.get_double("rho", 1.0) * c.get_double("nu", 0.01);
  fo.symmetric_strain = c.get_bool("symmetric_strain", false);
  assemble_forces(b, grid, fo, m.ops);

  m.coeff_u = projection_coefficients(su, b.velocity.leftCols(b.n_u + b.n_s), wv);
  m.coeff_p = projection_coefficients(sp_, b.pressure.leftCols(b.n_p), ws);
  m.coeff_nut = projection_coefficients(nut_target, b.viscosity, ws);

  m.gamma_setting = c.get_string("gamma", "auto");
  const double gamma = m.gamma_setting == "auto" ? 0.0 : c.get_double("gamma", 0.0);
  m.ridge = c.get_double("ridge", 1e-10);
  if (m.g_mode == GMode::TimeParameter) {
    m.rbf_inputs = time_parameter_inputs(m.mu, m.times, m.n_t);
    m.rbf_outputs = m.coeff_nut;
  } else {
    m.rbf_inputs = velocity_training_inputs(m.coeff_u.leftCols(b.n_u), m.n_t, m.interval);
    m.rbf_outputs = drop_first_instants(m.coeff_nut, m.n_t);
  }
  if (m.rbf_outputs.cols() > 0) m.rbf = rbf_fit(m.rbf_inputs, m.rbf_outputs, gamma, m.ridge);
  return m;
}

// ---------------------------------------------------------------------------

namespace {

struct Entry {
  std::string name;
  const Eigen::MatrixXd* matrix = nullptr;
  const Tensor3* tensor = nullptr;
};

std::vector<Entry> entries(const Model& m) {
  static const Eigen::MatrixXd empty;
  return {
      {"basis_u", &m.basis.velocity, nullptr},     {"basis_p", &m.basis.pressure, nullptr},
      {"basis_nut", &m.basis.viscosity, nullptr},  {"basis_nut_mean", &m.basis.mean_viscosity, nullptr},
      {"M", &m.ops.M, nullptr},                    {"B", &m.ops.B, nullptr},
      {"BT", &m.ops.BT, nullptr},                  {"H", &m.ops.H, nullptr},
      {"P", &m.ops.P, nullptr},                    {"C", nullptr, &m.ops.C},
      {"CT1", nullptr, &m.ops.CT1},                {"CT2", nullptr, &m.ops.CT2},
      {"CT1_mean", nullptr, &m.ops.CT1_mean},      {"CT2_mean", nullptr, &m.ops.CT2_mean},
      {"D", &m.ops.D, nullptr},                    {"E", nullptr, &m.ops.E},
      {"delta", &m.ops.delta, nullptr},            {"theta", &m.ops.theta, nullptr},
      {"coeff_u", &m.coeff_u, nullptr},            {"coeff_p", &m.coeff_p, nullptr},
      {"coeff_nut", &m.coeff_nut, nullptr},        {"rbf_inputs", &m.rbf_inputs, nullptr},
      {"rbf_outputs", &m.rbf_outputs, nullptr},    {"rbf_centers", &m.rbf.centers, nullptr},
      {"rbf_weights", &m.rbf.weights, nullptr},
  };
}

const char* bc_name(BcMode b) { return b == BcMode::Penalty ? "penalty" : "lifting"; }
const char* g_name(GMode g) { return g == GMode::TimeParameter ? "time" : "velocity"; }

std::string vec_text(const Eigen::VectorXd& v) {
  return format_doubles(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vec_from(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void write_model(const std::string& dir, const Model& m) {
  std::filesystem::create_directories(dir);
  Config man;
  man.set("format", "mixedrom-model-1");
  for (const auto& [k, v] : m.config.values()) man.set("config." + k, v);
  man.set("bc_mode", bc_name(m.bc_mode));
  man.set("g_mode", g_name(m.g_mode));
  man.set("viscosity_split", m.split ? "1" : "0");
  const ReducedBasis& b = m.basis;
  man.set("n_u", std::to_string(b.n_u));
  man.set("n_s", std::to_string(b.n_s));
  man.set("n_lift", std::to_string(b.n_lift));
  man.set("n_p", std::to_string(b.n_p));
  man.set("n_pc", std::to_string(b.n_pc));
  man.set("n_nut", std::to_string(b.viscosity.cols()));
  man.set("n_mean", std::to_string(b.mean_viscosity.cols()));
  man.set("rank_u", std::to_string(m.rank_u));
  man.set("rank_p", std::to_string(m.rank_p));
  man.set("rank_nut", std::to_string(m.rank_nut));
  man.set("eig_u", vec_text(m.eig_u));
  man.set("eig_p", vec_text(m.eig_p));
  man.set("eig_nut", vec_text(m.eig_nut));
  man.set("n_t", std::to_string(m.n_t));
  man.set("mu", format_doubles(m.mu));
  man.set("dt", format_doubles(m.dt));
  man.set("interval", format_doubles(m.interval));
  man.set("times", format_doubles(m.times));
  man.set("rbf.gamma_setting", m.gamma_setting);
  man.set("rbf.ridge", format_doubles({m.ridge}));
  man.set("rbf.gamma", format_doubles({m.rbf.gamma}));
  man.set("rbf.residual", format_doubles({m.rbf.residual}));
  man.set("rbf.lower", vec_text(m.rbf.lower));
  man.set("rbf.span", vec_text(m.rbf.span));
  for (const auto& e : entries(m)) {
    const std::string path = dir + "/" + e.name + ".romf";
    Eigen::Index rows = 0, cols = 0, slices = 1;
    if (e.matrix) {
      write_matrix(path, *e.matrix);
      rows = e.matrix->rows();
      cols = e.matrix->cols();
    } else {
      write_tensor(path, *e.tensor);
      slices = static_cast<Eigen::Index>(e.tensor->size());
      rows = slices ? (*e.tensor)[0].rows() : 0;
      cols = slices ? (*e.tensor)[0].cols() : 0;
    }
    char crc[16];
    std::snprintf(crc, sizeof(crc), "%08x", file_crc32(path));
    std::ostringstream v;
    v << crc << " " << rows << " " << cols << " " << slices;
    man.set("file." + e.name, v.str());
  }
  std::ofstream out(dir + "/model.txt", std::ios::trunc);
  out << man.to_text();
  if (!out) throw Error(Stage::Io, "cannot write " + dir + "/model.txt");
}

std::vector<std::string> model_files(const std::string& dir) {
  const Config man = Config::from_file(dir + "/model.txt");
  std::vector<std::string> files{"model.txt"};
  for (const auto& [k, v] : man.values())
    if (k.rfind("file.", 0) == 0) files.push_back(k.substr(5) + ".romf");
  return files;
}

Model load_model(const std::string& dir) {
  if (!std::filesystem::exists(dir + "/model.txt")) throw Error(Stage::Io, "no model.txt in " + dir);
  const Config man = Config::from_file(dir + "/model.txt");
  if (man.get_string("format", "") != "mixedrom-model-1") throw Error(Stage::Io, "unsupported model format in " + dir);
  Model m;
  for (const auto& [k, v] : man.values())
    if (k.rfind("config.", 0) == 0) m.config.set(k.substr(7), v);
  m.bc_mode = man.get_string("bc_mode", "") == "lifting" ? BcMode::Lifting : BcMode::Penalty;
  m.g_mode = man.get_string("g_mode", "") == "velocity" ? GMode::VelocityCoefficient : GMode::TimeParameter;
  m.split = man.get_bool("viscosity_split", false);
  m.basis.n_u = man.get_int("n_u", 0);
  m.basis.n_s = man.get_int("n_s", 0);
  m.basis.n_lift = man.get_int("n_lift", 0);
  m.basis.n_p = man.get_int("n_p", 0);
  m.basis.n_pc = man.get_int("n_pc", 0);
  m.rank_u = man.get_int("rank_u", 0);
  m.rank_p = man.get_int("rank_p", 0);
  m.rank_nut = man.get_int("rank_nut", 0);
  m.eig_u = vec_from(man.get_doubles("eig_u"));
  m.eig_p = vec_from(man.get_doubles("eig_p"));
  m.eig_nut = vec_from(man.get_doubles("eig_nut"));
  m.n_t = man.get_int("n_t", 0);
  m.mu = man.get_doubles("mu");
  m.dt = man.get_doubles("dt");
  m.interval = man.get_doubles("interval");
  m.times = man.get_doubles("times");
  m.gamma_setting = man.get_string("rbf.gamma_setting", "auto");
  m.ridge = man.get_double("rbf.ridge", 1e-10);

  for (const auto& e : entries(m)) {
    const std::string key = "file." + e.name;
    if (!man.has(key)) throw Error(Stage::Io, "manifest does not declare " + e.name);
    std::istringstream v(man.get_string(key, ""));
    std::string crc;
    Eigen::Index rows = 0, cols = 0, slices = 0;
    v >> crc >> rows >> cols >> slices;
    const std::string path = dir + "/" + e.name + ".romf";
    char actual[16];
    std::snprintf(actual, sizeof(actual), "%08x", file_crc32(path));
    if (crc != actual) throw Error(Stage::Io, "checksum mismatch for " + path);
    if (e.matrix) {
      auto& target = const_cast<Eigen::MatrixXd&>(*e.matrix);
      target = read_matrix(path);
      if (target.rows() != rows || target.cols() != cols) throw Error(Stage::Io, "shape mismatch for " + path);
    } else {
      auto& target = const_cast<Tensor3&>(*e.tensor);
      target = read_tensor(path);
      if (static_cast<Eigen::Index>(target.size()) != slices)
        throw Error(Stage::Io, "slice count mismatch for " + path);
      for (const auto& s : target)
        if (s.rows() != rows || s.cols() != cols) throw Error(Stage::Io, "shape mismatch for " + path);
    }
  }
  m.rbf.gamma = man.get_double("rbf.gamma", 1.0);
  m.rbf.ridge = m.ridge;
  m.rbf.residual = man.get_double("rbf.residual", 0.0);
  m.rbf.lower = vec_from(man.get_doubles("rbf.lower"));
  m.rbf.span = vec_from(man.get_doubles("rbf.span"));
  if (m.basis.velocity.cols() != m.basis.n_velocity() || m.basis.pressure.cols() != m.basis.n_pressure())
    throw Error(Stage::Io, "basis files do not match manifest ranks");
  return m;
}

void print_eigen_table(std::ostream& os, const Model& m, int rows) {
  const Eigen::VectorXd cu = cumulative_energy(m.eig_u);
  const Eigen::VectorXd cp = cumulative_energy(m.eig_p);
  const Eigen::VectorXd cn = cumulative_energy(m.eig_nut);
  os << "rank  lambda_u      ignored_u     lambda_p      ignored_p     lambda_nut    ignored_nut\n";
  const Eigen::Index n = std::min<Eigen::Index>(rows, std::max({m.eig_u.size(), m.eig_p.size(), m.eig_nut.size()}));
  auto cell = [&](const Eigen::VectorXd& l, const Eigen::VectorXd& c, Eigen::Index k) {
    std::ostringstream s;
    if (k < l.size()) s << std::scientific << std::setprecision(4) << std::setw(12) << l[k] << "  " << std::setw(12)
                        << std::max(0.0, 1.0 - c[k]);
    else s << std::setw(26) << "-";
    return s.str();
  };
  for (Eigen::Index k = 0; k < n; ++k)
    os << std::setw(4) << k + 1 << "  " << cell(m.eig_u, cu, k) << "  " << cell(m.eig_p, cp, k) << "  "
       << cell(m.eig_nut, cn, k) << "\n";
  os << "numerical ranks: u " << m.rank_u << ", p " << m.rank_p << ", nut " << m.rank_nut << "\n";
}

ModeCounts mode_counts(const Config& c) {
  ModeCounts n;
  n.n_u = c.get_int("n_u", -1);
  n.n_s = c.get_int("n_s", -1);
  n.n_p = c.get_int("n_p", -1);
  n.n_nut = c.get_int("n_nut", -1);
  return n;
}

OnlineSetup prepare_online(const Model& m, ModeCounts n, double rom_dt) {
  const ReducedBasis& b = m.basis;
  const int nnut_max = static_cast<int>(b.viscosity.cols());
  auto resolve = [](int req, int max, const char* name) {
    if (req < 0) return max;
    if (req > max) {
      std::ostringstream msg;
      msg << "requested " << name << "=" << req << " exceeds the stored rank " << max;
      throw Error(Stage::Config, msg.str());
    }
    return req;
  };
  n.n_u = resolve(n.n_u, b.n_u, "n_u");
  n.n_p = resolve(n.n_p, b.n_p, "n_p");
  n.n_s = resolve(n.n_s, std::min(b.n_s, n.n_p), "n_s");
  n.n_nut = resolve(n.n_nut, nnut_max, "n_nut");
  if (n.n_u < 1) throw Error(Stage::Config, "n_u must be at least 1");

  const auto unk = concat(range(0, n.n_u), range(b.n_u, n.n_s));
  const auto vel = concat(unk, range(b.n_u + b.n_s, b.n_lift));
  const auto pre = concat(range(0, n.n_p), range(b.n_p, b.n_pc));
  const auto nut = range(0, n.n_nut);
  const auto mean = range(0, b.mean_viscosity.cols());

  OnlineSetup o;
  o.counts = n;
  ReducedSystem& s = o.system;
  s.n_u = n.n_u;
  s.n_s = n.n_s;
  s.n_lift = b.n_lift;
  s.n_p = n.n_p;
  s.n_pc = b.n_pc;
  s.n_nut = n.n_nut;
  s.n_mean = static_cast<int>(mean.size());
  s.nu = m.config.get_double("nu", 0.01);
  s.M = take(m.ops.M, unk, vel);
  s.B = take(m.ops.B, unk, vel);
  s.BT = take(m.ops.BT, unk, vel);
  s.H = take(m.ops.H, unk, pre);
  s.P = take(m.ops.P, range(0, n.n_p), vel);
  for (Eigen::Index i : unk) {
    s.C.push_back(take(m.ops.C[i], vel, vel));
    s.CT.push_back(nnut_max ? Eigen::MatrixXd(take(m.ops.CT1[i], nut, vel) + take(m.ops.CT2[i], nut, vel))
                            : Eigen::MatrixXd(0, static_cast<Eigen::Index>(vel.size())));
    s.CT_mean.push_back(s.n_mean ? Eigen::MatrixXd(take(m.ops.CT1_mean[i], mean, vel) + take(m.ops.CT2_mean[i], mean, vel))
                                 : Eigen::MatrixXd(0, static_cast<Eigen::Index>(vel.size())));
  }
  if (m.bc_mode == BcMode::Penalty) {
    s.D = take(m.ops.D, unk, range(0, m.ops.D.cols()));
    for (const auto& e : m.ops.E) s.E.push_back(take(e, unk, unk));
  }
  if (m.ops.delta.rows() > 0) {
    s.delta = take(m.ops.delta, vel, {0, 1});
    s.theta = take(m.ops.theta, pre, {0, 1});
  }

  o.basis.velocity = take_cols(b.velocity, vel);
  o.basis.pressure = take_cols(b.pressure, pre);
  o.basis.viscosity = take_cols(b.viscosity, nut);
  o.basis.mean_viscosity = b.mean_viscosity;
  o.basis.n_u = n.n_u;
  o.basis.n_s = n.n_s;
  o.basis.n_lift = b.n_lift;
  o.basis.n_p = n.n_p;
  o.basis.n_pc = b.n_pc;

  // viscosity coefficients
  ViscosityModel& vm = o.viscosity;
  vm.mode = m.g_mode;
  vm.split = m.split;
  vm.n_u = m.g_mode == GMode::VelocityCoefficient ? n.n_u : 0;
  if (m.split) vm.mean = fit_mean_coefficients(m.mu);
  if (n.n_nut > 0) {
    if (m.g_mode == GMode::VelocityCoefficient && n.n_u != b.n_u) {
      const auto cols = concat(range(0, n.n_u), range(b.n_u, n.n_u));
      const double gamma = m.gamma_setting == "auto" ? 0.0 : std::stod(m.gamma_setting);
      vm.rbf = rbf_fit(take_cols(m.rbf_inputs, cols), m.rbf_outputs.leftCols(n.n_nut), gamma, m.ridge);
    } else {
      vm.rbf = m.rbf;
      vm.rbf.weights = m.rbf.weights.leftCols(n.n_nut);
    }
  }
  if (m.g_mode == GMode::VelocityCoefficient) {
    vm.input_map = take(m.ops.M, range(0, n.n_u), unk);
    const double interval = m.interval.empty() ? rom_dt : m.interval.front();
    vm.lag = std::max(1, static_cast<int>(std::lround(interval / rom_dt)));
  }

  // projection coefficients of every training snapshot in the sliced spaces
  const Eigen::MatrixXd muu = take(m.ops.M, unk, unk);
  const Eigen::LDLT<Eigen::MatrixXd> mass(muu);
  const int ns = static_cast<int>(m.coeff_u.rows());
  const int width = s.n() + n.n_p + n.n_nut;
  o.snapshot_coeffs.resize(ns, width);
  for (int r = 0; r < ns; ++r) {
    Eigen::VectorXd raw(static_cast<Eigen::Index>(unk.size()));
    for (size_t k = 0; k < unk.size(); ++k) raw[static_cast<Eigen::Index>(k)] = m.coeff_u(r, unk[k]);
    o.snapshot_coeffs.row(r).head(s.n()) = mass.solve(raw).transpose();
    o.snapshot_coeffs.row(r).segment(s.n(), n.n_p) = m.coeff_p.row(r).head(n.n_p);
    o.snapshot_coeffs.row(r).tail(n.n_nut) = m.coeff_nut.row(r).head(n.n_nut);
  }
  Eigen::MatrixXd first(m.num_samples(), width);
  for (int k = 0; k < m.num_samples(); ++k) first.row(k) = o.snapshot_coeffs.row(k * m.n_t);
  o.initial = fit_linear_table(m.mu, first);
  return o;
}

}  // namespace mixedrom
