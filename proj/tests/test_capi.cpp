#include "doctest.h"

#include "mixedrom/mixedrom.h"

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mixedrom_capi_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

mrom_config* tiny_config() {
  mrom_config* c = nullptr;
  REQUIRE(mrom_config_create(&c) == MROM_OK);
  for (const char* kv : {"geometry=cavity", "nx=16", "ny=8", "nu=0.01", "mu=1.0, 1.5", "dt=auto", "spinup=0.5",
                         "n_t=5", "save_every=10"})
    REQUIRE(mrom_config_set(c, kv) == MROM_OK);
  return c;
}

void count_lines(const char*, void* user) { ++*static_cast<int*>(user); }

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(mrom_version()) > 0);
  CHECK(std::string(mrom_status_name(MROM_OK)) != std::string(mrom_status_name(MROM_ERR_IO)));
}

TEST_CASE("malformed assignments and null handles are argument errors") {
  mrom_config* c = nullptr;
  REQUIRE(mrom_config_create(&c) == MROM_OK);
  CHECK(mrom_config_set(c, "no equals sign") != MROM_OK);
  CHECK(std::strlen(mrom_last_error()) > 0);
  CHECK(mrom_config_set(nullptr, "a=1") == MROM_ERR_ARGUMENT);
  CHECK(mrom_config_create(nullptr) == MROM_ERR_ARGUMENT);
  mrom_config_destroy(c);
}

TEST_CASE("loading a missing model reports an error") {
  mrom_model* m = nullptr;
  CHECK(mrom_model_load(scratch("missing").c_str(), &m) != MROM_OK);
  CHECK(m == nullptr);
  CHECK(std::strlen(mrom_last_error()) > 0);
}

TEST_CASE("offline and online round trip through the C interface") {
  const std::string model = scratch("model");
  mrom_config* c = tiny_config();
  REQUIRE(mrom_config_set(c, "generate=1") == MROM_OK);
  REQUIRE(mrom_config_set(c, ("model=" + model).c_str()) == MROM_OK);
  int lines = 0;
  REQUIRE(mrom_offline(c, count_lines, &lines) == MROM_OK);
  CHECK(lines > 0);

  mrom_model* m = nullptr;
  REQUIRE(mrom_model_load(model.c_str(), &m) == MROM_OK);
  int n_u = 0, n_s = 0, n_p = 0, n_nut = 0;
  REQUIRE(mrom_model_ranks(m, &n_u, &n_s, &n_p, &n_nut) == MROM_OK);
  CHECK(n_u > 0);
  CHECK(n_p > 0);
  CHECK(n_s == n_p);
  mrom_model_destroy(m);

  mrom_config* q = nullptr;
  REQUIRE(mrom_config_create(&q) == MROM_OK);
  REQUIRE(mrom_config_set(q, ("model=" + model).c_str()) == MROM_OK);
  REQUIRE(mrom_config_set(q, "mu_star=1.25") == MROM_OK);
  mrom_result* r = nullptr;
  REQUIRE(mrom_online(q, nullptr, nullptr, &r) == MROM_OK);
  const size_t states = mrom_result_num_states(r);
  CHECK(states > 1);
  double t = -1.0;
  size_t length = 0;
  std::vector<double> coeffs(n_u + n_s);
  REQUIRE(mrom_result_state(r, 0, &t, coeffs.data(), coeffs.size(), &length) == MROM_OK);
  CHECK(length == static_cast<size_t>(n_u + n_s));
  CHECK(mrom_result_state(r, states, &t, coeffs.data(), coeffs.size(), &length) != MROM_OK);
  CHECK(mrom_result_inlet_mismatch(r) >= 0.0);
  mrom_result_destroy(r);

  REQUIRE(mrom_config_set(q, "n_u=99") == MROM_OK);
  CHECK(mrom_online(q, nullptr, nullptr, &r) == MROM_ERR_CONFIG);
  CHECK(std::string(mrom_last_error()).find("n_u") != std::string::npos);
  mrom_config_destroy(q);
  mrom_config_destroy(c);
}

TEST_CASE("sweeps report the row count beyond the capacity") {
  const std::string model = scratch("sweep");
  mrom_config* c = tiny_config();
  REQUIRE(mrom_config_set(c, "generate=1") == MROM_OK);
  REQUIRE(mrom_config_set(c, "n_t=1") == MROM_OK);
  REQUIRE(mrom_config_set(c, "steady_tol=1e-4") == MROM_OK);
  REQUIRE(mrom_config_set(c, "spinup=100") == MROM_OK);
  REQUIRE(mrom_config_set(c, ("model=" + model).c_str()) == MROM_OK);
  const mrom_status st = mrom_offline(c, nullptr, nullptr);
  INFO(std::string(mrom_last_error()));
  REQUIRE(st == MROM_OK);
  mrom_config* s = nullptr;
  REQUIRE(mrom_config_create(&s) == MROM_OK);
  REQUIRE(mrom_config_set(s, ("model=" + model).c_str()) == MROM_OK);
  REQUIRE(mrom_config_set(s, "mu_star=1.2") == MROM_OK);
  REQUIRE(mrom_config_set(s, "taus=1e2, 1e4, 1e6") == MROM_OK);
  double tau[2], mismatch[2];
  size_t count = 0;
  REQUIRE(mrom_sweep_tau(s, nullptr, nullptr, tau, mismatch, 2, &count) == MROM_OK);
  CHECK(count == 3);
  CHECK(tau[0] == 100.0);
  CHECK(tau[1] == 10000.0);
  CHECK(mismatch[1] < mismatch[0]);
  mrom_config_destroy(s);
  mrom_config_destroy(c);
}
