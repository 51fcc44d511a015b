#pragma once

#include <stdexcept>
#include <string>

namespace cutsurf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// |grad phi| fell below the surface's c0 at an evaluated point.
struct DegenerateGradientError : Error {
  using Error::Error;
};

/// Root bracketing failed in find_cut.
struct BracketError : Error {
  using Error::Error;
};

struct DiscretizationError : Error {
  using Error::Error;
};

struct SingularMatrixError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace cutsurf
