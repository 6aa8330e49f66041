#include "mixedrom/config.hpp"

#include "mixedrom/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mixedrom {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw Error(Stage::Config, "key '" + key + "': not a number: '" + text + "'");
  return v;
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Stage::Config, "cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    if (line.find('=') == std::string::npos)
      throw Error(Stage::Config, "line " + std::to_string(lineno) + ": expected key = value");
    c.set(line);
  }
  return c;
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(Stage::Config, "expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
  if (key.empty()) throw Error(Stage::Config, "empty key");
  values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) throw Error(Stage::Config, "missing required key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string t = trim(it->second);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw Error(Stage::Config, "key '" + key + "': not an integer: '" + it->second + "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw Error(Stage::Config, "key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  const auto it = values_.find(key);
  if (it == values_.end()) return out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

std::string Config::to_text() const {
  std::string s;
  for (const auto& [k, v] : values_) s += k + " = " + v + "\n";
  return s;
}

std::string format_doubles(const std::vector<double>& v) {
  std::string s;
  char buf[32];
  for (size_t k = 0; k < v.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[k]);
    if (k) s += ",";
    s += buf;
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

PatchBc wall() {
  PatchBc b;
  b.velocity = BcKind::Dirichlet;
  return b;
}

PatchBc inflow(Vec2 dir) {
  PatchBc b;
  b.velocity = BcKind::Dirichlet;
  b.velocity_value = dir;
  b.parametrized = true;
  return b;
}

PatchBc outflow() {
  PatchBc b;
  b.pressure = BcKind::Dirichlet;
  return b;
}

}  // namespace

Geometry make_geometry(const Config& config) {
  Geometry g;
  g.preset = config.get_string("geometry", "cavity");
  GridSpec& s = g.grid;
  // Block extents are given as fractions of (lx, ly) so size overrides keep the layout.
  struct FracBlock {
    std::string name;
    double x0, x1, y0, y1;
  };
  std::vector<FracBlock> blocks;
  if (g.preset == "cavity") {
    s.nx = 16, s.ny = 16, s.lx = 1.0, s.ly = 1.0;
    s.left = s.right = s.bottom = "wall";
    s.top = "lid";
    g.bcs["wall"] = wall();
    g.bcs["lid"] = inflow({1.0, 0.0});
  } else if (g.preset == "box") {
    s.nx = 8, s.ny = 8, s.lx = 1.0, s.ly = 1.0;
    for (const char* n : {"left", "right", "bottom", "top"}) g.bcs[n] = inflow({1.0, 0.0});
  } else if (g.preset == "step") {
    s.nx = 64, s.ny = 32, s.lx = 8.0, s.ly = 2.0;
    s.left = "inlet";
    s.right = "outlet";
    s.bottom = s.top = "wall";
    blocks.push_back({"wall", 0.0, 0.25, 0.0, 0.5});
    g.bcs["inlet"] = inflow({1.0, 0.0});
    g.bcs["outlet"] = outflow();
    g.bcs["wall"] = wall();
  } else if (g.preset == "obstacle") {
    s.nx = 96, s.ny = 48, s.lx = 12.0, s.ly = 6.0;
    s.left = "inlet";
    s.right = "outlet";
    s.bottom = s.top = "wall";
    // side ly/6, shifted up by one cell height of the default grid to break symmetry
    blocks.push_back({"obstacle", 0.25, 0.25 + 1.0 / 12.0, 5.0 / 12.0 + 1.0 / 48.0, 7.0 / 12.0 + 1.0 / 48.0});
    g.bcs["inlet"] = inflow({1.0, 0.0});
    g.bcs["outlet"] = outflow();
    g.bcs["wall"] = wall();
    g.bcs["obstacle"] = wall();
    g.force_patch = "obstacle";
  } else {
    throw Error(Stage::Config, "unknown geometry preset '" + g.preset + "'");
  }
  s.nx = config.get_int("nx", s.nx);
  s.ny = config.get_int("ny", s.ny);
  s.lx = config.get_double("lx", s.lx);
  s.ly = config.get_double("ly", s.ly);
  for (const auto& b : blocks) s.blocks.push_back({b.name, b.x0 * s.lx, b.x1 * s.lx, b.y0 * s.ly, b.y1 * s.ly});
  if (g.preset == "obstacle") g.d_ref = (blocks[0].y1 - blocks[0].y0) * s.ly;
  g.d_ref = config.get_double("d_ref", g.d_ref);
  g.force_patch = config.get_string("force_patch", g.force_patch);
  return g;
}

BoundarySetup boundary_setup(const StructuredGrid& grid, const Geometry& geometry) {
  BoundarySetup out;
  for (const auto& p : grid.patches()) {
    const auto it = geometry.bcs.find(p.name);
    if (it == geometry.bcs.end()) throw Error(Stage::Config, "no boundary condition for patch '" + p.name + "'");
    out.patches.push_back(it->second);
  }
  return out;
}

}  // namespace mixedrom
