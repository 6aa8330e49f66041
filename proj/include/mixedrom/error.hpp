#pragma once

#include <stdexcept>
#include <string>

namespace mixedrom {

/// Pipeline stage an error originated in; used to tag CLI messages and map C status codes.
enum class Stage {
  Config,
  Io,
  Grid,
  Fom,
  Pod,
  Galerkin,
  Rbf,
  Solver,
  Postproc,
};

const char* stage_name(Stage stage);

class Error : public std::runtime_error {
public:
  Error(Stage stage, const std::string& what);

  Stage stage() const { return stage_; }

private:
  Stage stage_;
};

}  // namespace mixedrom
