#include "mixedrom/error.hpp"

namespace mixedrom {

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::Config: return "config";
    case Stage::Io: return "io";
    case Stage::Grid: return "grid";
    case Stage::Fom: return "fom";
    case Stage::Pod: return "pod";
    case Stage::Galerkin: return "galerkin";
    case Stage::Rbf: return "rbf";
    case Stage::Solver: return "rom_solver";
    case Stage::Postproc: return "postproc";
  }
  return "unknown";
}

Error::Error(Stage stage, const std::string& what)
    : std::runtime_error(std::string("[") + stage_name(stage) + "] " + what), stage_(stage) {}

}  // namespace mixedrom
