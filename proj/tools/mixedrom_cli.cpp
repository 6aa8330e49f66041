#include "mixedrom/mixedrom.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

struct Common {
  std::string config_file;
  std::vector<std::string> sets;
  std::string archive, model, output, reference, mu_star;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config_file, "key = value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", c.sets, "override a configuration key (key=value), repeatable");
  cmd->add_option("--archive", c.archive, "snapshot archive directory");
  cmd->add_option("--model", c.model, "model directory");
  cmd->add_option("--output", c.output, "output directory");
  cmd->add_option("--reference", c.reference, "reference snapshot archive for error reports");
  cmd->add_option("--mu", c.mu_star, "online parameter value");
}

void print_line(const char* line, void*) { std::printf("%s\n", line); }

int fail(mrom_status s) {
  std::fprintf(stderr, "error: %s\n", mrom_last_error());
  return static_cast<int>(s);
}

// Builds the configuration: file first, then flags, then --set overrides.
mrom_status make_config(const Common& c, mrom_config** out) {
  mrom_status s = c.config_file.empty() ? mrom_config_create(out) : mrom_config_load(c.config_file.c_str(), out);
  if (s != MROM_OK) return s;
  auto put = [&](const char* key, const std::string& value) {
    if (value.empty() || s != MROM_OK) return;
    s = mrom_config_set(*out, (std::string(key) + "=" + value).c_str());
  };
  put("archive", c.archive);
  put("model", c.model);
  put("output", c.output);
  put("reference", c.reference);
  put("mu_star", c.mu_star);
  for (const auto& kv : c.sets)
    if (s == MROM_OK) s = mrom_config_set(*out, kv.c_str());
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed POD-Galerkin / RBF reduced-order model driver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mrom_version());

  Common gen, off, on, tau, modes;
  bool generate_first = false;
  std::string tau_list;

  auto* cmd_gen = app.add_subcommand("generate", "run the full-order snapshot campaign");
  add_common(cmd_gen, gen);
  auto* cmd_off = app.add_subcommand("offline", "POD, Galerkin projection and interpolant training");
  add_common(cmd_off, off);
  cmd_off->add_flag("--generate", generate_first, "run the snapshot campaign first");
  auto* cmd_on = app.add_subcommand("online", "reduced solve at a new parameter value");
  add_common(cmd_on, on);
  cmd_on->add_option("--tau-sweep", tau_list, "comma-separated penalty factors; runs a tau sweep instead");
  auto* cmd_tau = app.add_subcommand("sweep-tau", "inlet-trace mismatch over penalty factors");
  add_common(cmd_tau, tau);
  auto* cmd_modes = app.add_subcommand("sweep-modes", "mean held-out errors over mode counts");
  add_common(cmd_modes, modes);

  CLI11_PARSE(app, argc, argv);

  mrom_config* cfg = nullptr;
  mrom_status s = MROM_OK;
  auto run_tau = [&](const Common& c, const std::string& list) {
    s = make_config(c, &cfg);
    if (s == MROM_OK && !list.empty()) s = mrom_config_set(cfg, ("taus=" + list).c_str());
    if (s != MROM_OK) return;
    std::vector<double> t(64), mm(64);
    size_t n = 0;
    s = mrom_sweep_tau(cfg, print_line, nullptr, t.data(), mm.data(), t.size(), &n);
  };

  if (*cmd_gen) {
    s = make_config(gen, &cfg);
    if (s == MROM_OK) s = mrom_generate(cfg, print_line, nullptr);
  } else if (*cmd_off) {
    s = make_config(off, &cfg);
    if (s == MROM_OK && generate_first) s = mrom_config_set(cfg, "generate=1");
    if (s == MROM_OK) s = mrom_offline(cfg, print_line, nullptr);
  } else if (*cmd_on) {
    if (!tau_list.empty()) {
      run_tau(on, tau_list);
    } else {
      s = make_config(on, &cfg);
      if (s == MROM_OK) s = mrom_online(cfg, print_line, nullptr, nullptr);
    }
  } else if (*cmd_tau) {
    run_tau(tau, "");
  } else if (*cmd_modes) {
    s = make_config(modes, &cfg);
    size_t n = 0;
    if (s == MROM_OK) s = mrom_sweep_modes(cfg, print_line, nullptr, nullptr, nullptr, nullptr, 0, &n);
  }
  mrom_config_destroy(cfg);
  return s == MROM_OK ? 0 : fail(s);
}
