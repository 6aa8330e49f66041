#include "mixedrom/archive.hpp"

#include "mixedrom/error.hpp"
#include "mixedrom/matrix_io.hpp"

#include <filesystem>
#include <fstream>

namespace mixedrom {

void write_archive(const std::string& dir, const SnapshotArchive& a) {
  const int ns = a.num_snapshots();
  if (a.n_t < 1 || ns != a.num_samples() * a.n_t || a.p.cols() != ns || a.nut.cols() != ns ||
      static_cast<int>(a.times.size()) != ns || a.dt.size() != a.mu.size() || a.interval.size() != a.mu.size())
    throw Error(Stage::Io, "inconsistent snapshot archive");
  std::filesystem::create_directories(dir);
  write_matrix(dir + "/u.romf", a.u);
  write_matrix(dir + "/p.romf", a.p);
  write_matrix(dir + "/nut.romf", a.nut);
  write_matrix(dir + "/lift.romf", a.lift);
  Config meta;
  for (const auto& [k, v] : a.config.values()) meta.set("config." + k, v);
  meta.set("n_t", std::to_string(a.n_t));
  meta.set("mu", format_doubles(a.mu));
  meta.set("dt", format_doubles(a.dt));
  meta.set("interval", format_doubles(a.interval));
  meta.set("times", format_doubles(a.times));
  std::ofstream out(dir + "/meta.txt", std::ios::trunc);
  if (!out) throw Error(Stage::Io, "cannot write " + dir + "/meta.txt");
  out << meta.to_text();
  if (!out) throw Error(Stage::Io, "cannot write " + dir + "/meta.txt");
}

SnapshotArchive read_archive(const std::string& dir) {
  SnapshotArchive a;
  const Config meta = Config::from_file(dir + "/meta.txt");
  for (const auto& [k, v] : meta.values()) {
    if (k.rfind("config.", 0) == 0) a.config.set(k.substr(7), v);
  }
  a.n_t = meta.get_int("n_t", 0);
  a.mu = meta.get_doubles("mu");
  a.dt = meta.get_doubles("dt");
  a.interval = meta.get_doubles("interval");
  a.times = meta.get_doubles("times");
  a.u = read_matrix(dir + "/u.romf");
  a.p = read_matrix(dir + "/p.romf");
  a.nut = read_matrix(dir + "/nut.romf");
  if (std::filesystem::exists(dir + "/lift.romf")) a.lift = read_matrix(dir + "/lift.romf");
  const int ns = a.num_snapshots();
  if (a.n_t < 1 || ns != a.num_samples() * a.n_t || a.p.cols() != ns || a.nut.cols() != ns ||
      static_cast<int>(a.times.size()) != ns || a.dt.size() != a.mu.size() || a.interval.size() != a.mu.size())
    throw Error(Stage::Io, "archive metadata does not match payload in " + dir);
  return a;
}

}  // namespace mixedrom
