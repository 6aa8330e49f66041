#pragma once

#include "mixedrom/grid.hpp"

#include <map>
#include <string>
#include <vector>

namespace mixedrom {

/// Flat key=value run configuration. Lines starting with '#' are comments;
/// later assignments (including command-line overrides) replace earlier ones.
class Config {
public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  /// Parses "key=value".
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list of numbers.
  std::vector<double> get_doubles(const std::string& key) const;

  /// Sorted "key = value" lines.
  std::string to_text() const;
  const std::map<std::string, std::string>& values() const { return values_; }

private:
  std::map<std::string, std::string> values_;
};

/// Comma-separated list with round-trip precision.
std::string format_doubles(const std::vector<double>& values);

/// Grid layout plus per-patch boundary conditions of a geometry preset.
struct Geometry {
  std::string preset;
  GridSpec grid;
  std::map<std::string, PatchBc> bcs;
  /// Patch used for force and lift output; empty when the preset has none.
  std::string force_patch;
  /// Reference length for the lift coefficient.
  double d_ref = 1.0;
};

/// Presets: "cavity" (lid-driven square), "box" (every side a parametrized
/// inflow of direction (1, 0)), "step" (channel with a backward-facing step),
/// "obstacle" (channel with a square obstacle). nx, ny, lx, ly override the
/// preset sizes; solid blocks scale with lx, ly.
Geometry make_geometry(const Config& config);

/// Boundary setup in grid patch order. Throws when a patch has no condition.
BoundarySetup boundary_setup(const StructuredGrid& grid, const Geometry& geometry);

}  // namespace mixedrom
