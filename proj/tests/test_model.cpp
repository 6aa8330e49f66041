#include "doctest.h"
#include "support.hpp"

#include "mixedrom/archive.hpp"
#include "mixedrom/error.hpp"
#include "mixedrom/fom.hpp"
#include "mixedrom/matrix_io.hpp"
#include "mixedrom/model.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

using namespace mixedrom;
using namespace mixedrom::testing;
namespace fs = std::filesystem;

namespace {

const SnapshotArchive& tiny_archive() {
  static const SnapshotArchive ar = [] {
    const Config raw = tiny_campaign();
    return generate_snapshots(fom_config(raw), raw);
  }();
  return ar;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Config options(const std::string& bc_mode) { return Config::from_string("bc_mode = " + bc_mode + "\n"); }

}  // namespace

TEST_CASE("matrix files carry the ROMF header and round-trip exactly") {
  const std::string dir = scratch_dir("matrix");
  fs::create_directories(dir);
  Rng rng(1);
  const Eigen::MatrixXd m = rng.matrix(3, 5);
  write_matrix(dir + "/m.romf", m);
  const std::string bytes = slurp(dir + "/m.romf");
  REQUIRE(bytes.size() == 16 + 15 * sizeof(double));
  CHECK(bytes.substr(0, 4) == "ROMF");
  std::uint32_t head[3];
  std::memcpy(head, bytes.data() + 4, sizeof(head));
  CHECK(head[0] == 3);
  CHECK(head[1] == 5);
  CHECK(head[2] == 1);
  double first;
  std::memcpy(&first, bytes.data() + 16, sizeof(first));
  CHECK(first == m(0, 0));
  CHECK(read_matrix(dir + "/m.romf") == m);

  const Tensor3 t = {rng.matrix(2, 4), rng.matrix(2, 4), rng.matrix(2, 4)};
  write_tensor(dir + "/t.romf", t);
  const Tensor3 back = read_tensor(dir + "/t.romf");
  REQUIRE(back.size() == 3);
  for (int s = 0; s < 3; ++s) CHECK(back[s] == t[s]);
  write_tensor(dir + "/empty.romf", {});
  CHECK(read_tensor(dir + "/empty.romf").empty());
}

TEST_CASE("truncated and foreign files are rejected") {
  const std::string dir = scratch_dir("badmatrix");
  fs::create_directories(dir);
  std::ofstream(dir + "/short.romf", std::ios::binary) << "ROMF";
  CHECK_THROWS_AS(read_matrix(dir + "/short.romf"), Error);
  std::ofstream(dir + "/foreign.romf", std::ios::binary) << std::string(40, 'x');
  CHECK_THROWS_AS(read_matrix(dir + "/foreign.romf"), Error);
  CHECK_THROWS_AS(read_matrix(dir + "/absent.romf"), Error);
}

TEST_CASE("archives round-trip") {
  const std::string dir = scratch_dir("archive");
  const SnapshotArchive& ar = tiny_archive();
  write_archive(dir, ar);
  const SnapshotArchive back = read_archive(dir);
  CHECK(back.u == ar.u);
  CHECK(back.p == ar.p);
  CHECK(back.nut == ar.nut);
  CHECK(back.n_t == ar.n_t);
  CHECK(back.mu == ar.mu);
  CHECK(back.times == ar.times);
}

TEST_CASE("model directories hold every manifest file and reload exactly") {
  for (const char* mode : {"penalty", "lifting"}) {
    CAPTURE(mode);
    const std::string dir = scratch_dir(std::string("model_") + mode);
    const Model m = build_model(tiny_archive(), options(mode));
    write_model(dir, m);
    const std::vector<std::string> files = model_files(dir);
    CHECK(!files.empty());
    for (const auto& f : files) CHECK(fs::exists(fs::path(dir) / f));
    const Model back = load_model(dir);
    CHECK(back.rank_u == m.rank_u);
    CHECK(back.basis.n_u == m.basis.n_u);
    CHECK(back.basis.n_lift == m.basis.n_lift);
    CHECK(back.basis.velocity == m.basis.velocity);
    CHECK(back.ops.B == m.ops.B);
    CHECK(back.ops.E.size() == m.ops.E.size());
    CHECK(back.rbf.weights == m.rbf.weights);
    CHECK(back.bc_mode == m.bc_mode);
  }
}

TEST_CASE("penalty and lifting models carry exclusive boundary operators") {
  const Model pen = build_model(tiny_archive(), options("penalty"));
  const Model lift = build_model(tiny_archive(), options("lifting"));
  CHECK(!pen.ops.E.empty());
  CHECK(pen.basis.n_lift == 0);
  CHECK(lift.ops.E.empty());
  CHECK(lift.basis.n_lift > 0);
}

TEST_CASE("a corrupted model file fails its checksum") {
  const std::string dir = scratch_dir("corrupt");
  write_model(dir, build_model(tiny_archive(), options("penalty")));
  const fs::path target = fs::path(dir) / "B.romf";
  std::string bytes = slurp(target);
  bytes.back() ^= 0x01;
  std::ofstream(target, std::ios::binary | std::ios::trunc) << bytes;
  try {
    load_model(dir);
    FAIL("corrupted model loaded");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("checksum") != std::string::npos);
  }
}

TEST_CASE("requested mode counts beyond the stored ranks name the count") {
  const Model m = build_model(tiny_archive(), options("penalty"));
  ModeCounts n;
  n.n_p = m.basis.n_p + 1;
  try {
    prepare_online(m, n, 0.0);
    FAIL("oversized mode count accepted");
  } catch (const Error& e) {
    CHECK(e.stage() == Stage::Config);
    CHECK(std::string(e.what()).find("n_p") != std::string::npos);
  }
  const OnlineSetup s = prepare_online(m, ModeCounts{2, 1, 1, 1}, 0.0);
  CHECK(s.system.n() == 3);
  CHECK(s.system.n_p == 1);
  CHECK(s.system.M.rows() == 3);
}

TEST_CASE("offline stage is bit-identical across runs") {
  const std::string a = scratch_dir("det_a"), b = scratch_dir("det_b");
  write_model(a, build_model(tiny_archive(), options("lifting")));
  write_model(b, build_model(tiny_archive(), options("lifting")));
  for (const auto& f : model_files(a)) CHECK(slurp(fs::path(a) / f) == slurp(fs::path(b) / f));
  CHECK(slurp(fs::path(a) / "model.txt") == slurp(fs::path(b) / "model.txt"));
}
