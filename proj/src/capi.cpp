#include "mixedrom/mixedrom.h"

#include "mixedrom/error.hpp"
#include "mixedrom/workflow.hpp"

#include <exception>
#include <new>
#include <ostream>
#include <streambuf>
#include <string>

struct mrom_config {
  mixedrom::Config config;
};

struct mrom_model {
  mixedrom::Model model;
};

struct mrom_result {
  mixedrom::QueryResult result;
};

namespace {

thread_local std::string last_error;

mrom_status status_of(mixedrom::Stage stage) {
  using mixedrom::Stage;
  switch (stage) {
    case Stage::Config: return MROM_ERR_CONFIG;
    case Stage::Io: return MROM_ERR_IO;
    case Stage::Grid: return MROM_ERR_GRID;
    case Stage::Fom: return MROM_ERR_FOM;
    case Stage::Pod: return MROM_ERR_POD;
    case Stage::Galerkin: return MROM_ERR_GALERKIN;
    case Stage::Rbf: return MROM_ERR_RBF;
    case Stage::Solver: return MROM_ERR_SOLVER;
    case Stage::Postproc: return MROM_ERR_POSTPROC;
  }
  return MROM_ERR_INTERNAL;
}

template <typename F>
mrom_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return MROM_OK;
  } catch (const mixedrom::Error& e) {
    last_error = e.what();
    return status_of(e.stage());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MROM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MROM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return MROM_ERR_INTERNAL;
  }
}

mrom_status argument_error(const char* what) {
  last_error = what;
  return MROM_ERR_ARGUMENT;
}

// Forwards complete lines to the log callback.
class LineBuffer : public std::streambuf {
public:
  LineBuffer(mrom_log_fn fn, void* user) : fn_(fn), user_(user) {}
  ~LineBuffer() override {
    if (!line_.empty()) emit();
  }

protected:
  int overflow(int ch) override {
    if (ch == traits_type::eof()) return 0;
    if (ch == '\n') emit();
    else line_.push_back(static_cast<char>(ch));
    return ch;
  }

private:
  void emit() {
    if (fn_) fn_(line_.c_str(), user_);
    line_.clear();
  }
  mrom_log_fn fn_;
  void* user_;
  std::string line_;
};

}  // namespace

extern "C" {

const char* mrom_version(void) { return "1.0.0"; }
const char* mrom_last_error(void) { return last_error.c_str(); }

const char* mrom_status_name(mrom_status s) {
  switch (s) {
    case MROM_OK: return "ok";
    case MROM_ERR_CONFIG: return "config";
    case MROM_ERR_IO: return "io";
    case MROM_ERR_GRID: return "grid";
    case MROM_ERR_FOM: return "fom";
    case MROM_ERR_POD: return "pod";
    case MROM_ERR_GALERKIN: return "galerkin";
    case MROM_ERR_RBF: return "rbf";
    case MROM_ERR_SOLVER: return "rom_solver";
    case MROM_ERR_POSTPROC: return "postproc";
    case MROM_ERR_ARGUMENT: return "argument";
    case MROM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

mrom_status mrom_config_create(mrom_config** out) {
  if (!out) return argument_error("null output handle");
  return guarded([&] { *out = new mrom_config(); });
}

mrom_status mrom_config_load(const char* path, mrom_config** out) {
  if (!path || !out) return argument_error("null argument");
  return guarded([&] { *out = new mrom_config{mixedrom::Config::from_file(path)}; });
}

mrom_status mrom_config_set(mrom_config* c, const char* assignment) {
  if (!c || !assignment) return argument_error("null argument");
  return guarded([&] { c->config.set(std::string(assignment)); });
}

void mrom_config_destroy(mrom_config* c) { delete c; }

mrom_status mrom_generate(const mrom_config* c, mrom_log_fn log, void* user) {
  if (!c) return argument_error("null config");
  return guarded([&] {
    LineBuffer buf(log, user);
    std::ostream os(&buf);
    mixedrom::run_generate(c->config, os);
  });
}

mrom_status mrom_offline(const mrom_config* c, mrom_log_fn log, void* user) {
  if (!c) return argument_error("null config");
  return guarded([&] {
    LineBuffer buf(log, user);
    std::ostream os(&buf);
    mixedrom::run_offline(c->config, os);
  });
}

mrom_status mrom_online(const mrom_config* c, mrom_log_fn log, void* user, mrom_result** out) {
  if (!c) return argument_error("null config");
  return guarded([&] {
    LineBuffer buf(log, user);
    std::ostream os(&buf);
    auto r = mixedrom::run_online(c->config, os);
    if (out) *out = new mrom_result{std::move(r)};
  });
}

mrom_status mrom_sweep_tau(const mrom_config* c, mrom_log_fn log, void* user, double* tau, double* mismatch,
                           size_t capacity, size_t* count) {
  if (!c) return argument_error("null config");
  return guarded([&] {
    LineBuffer buf(log, user);
    std::ostream os(&buf);
    const auto rows = mixedrom::run_tau_sweep(c->config, os);
    for (size_t k = 0; k < rows.size() && k < capacity; ++k) {
      if (tau) tau[k] = rows[k].tau;
      if (mismatch) mismatch[k] = rows[k].inlet_mismatch;
    }
    if (count) *count = rows.size();
  });
}

mrom_status mrom_sweep_modes(const mrom_config* c, mrom_log_fn log, void* user, int* modes, double* eps_u,
                             double* eps_p, size_t capacity, size_t* count) {
  if (!c) return argument_error("null config");
  return guarded([&] {
    LineBuffer buf(log, user);
    std::ostream os(&buf);
    const auto rows = mixedrom::run_mode_sweep(c->config, os);
    for (size_t k = 0; k < rows.size() && k < capacity; ++k) {
      if (modes) modes[k] = rows[k].modes;
      if (eps_u) eps_u[k] = rows[k].mean_eps_u;
      if (eps_p) eps_p[k] = rows[k].mean_eps_p;
    }
    if (count) *count = rows.size();
  });
}

mrom_status mrom_model_load(const char* dir, mrom_model** out) {
  if (!dir || !out) return argument_error("null argument");
  return guarded([&] { *out = new mrom_model{mixedrom::load_model(dir)}; });
}

mrom_status mrom_model_ranks(const mrom_model* m, int* n_u, int* n_s, int* n_p, int* n_nut) {
  if (!m) return argument_error("null model");
  const auto& b = m->model.basis;
  if (n_u) *n_u = b.n_u;
  if (n_s) *n_s = b.n_s;
  if (n_p) *n_p = b.n_p;
  if (n_nut) *n_nut = static_cast<int>(b.viscosity.cols());
  return MROM_OK;
}

void mrom_model_destroy(mrom_model* m) { delete m; }

size_t mrom_result_num_states(const mrom_result* r) { return r ? r->result.trajectory.states.size() : 0; }

mrom_status mrom_result_state(const mrom_result* r, size_t k, double* t, double* coeffs, size_t capacity,
                              size_t* length) {
  if (!r) return argument_error("null result");
  const auto& states = r->result.trajectory.states;
  if (k >= states.size()) return argument_error("state index out of range");
  const auto& s = states[k];
  if (t) *t = s.t;
  const size_t n = static_cast<size_t>(s.a.size());
  if (length) *length = n;
  for (size_t i = 0; coeffs && i < n && i < capacity; ++i) coeffs[i] = s.a[static_cast<Eigen::Index>(i)];
  return MROM_OK;
}

mrom_status mrom_result_errors(const mrom_result* r, double* eps_u, double* eps_p) {
  if (!r) return argument_error("null result");
  if (r->result.eps_u.empty()) {
    last_error = "result has no reference comparison";
    return MROM_ERR_CONFIG;
  }
  if (eps_u) *eps_u = r->result.mean_eps_u;
  if (eps_p) *eps_p = r->result.mean_eps_p;
  return MROM_OK;
}

double mrom_result_inlet_mismatch(const mrom_result* r) { return r ? r->result.inlet_mismatch : 0.0; }

void mrom_result_destroy(mrom_result* r) { delete r; }

}  // extern "C"
