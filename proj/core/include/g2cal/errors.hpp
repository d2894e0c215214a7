#pragma once

#include <stdexcept>
#include <string>

namespace g2cal {

enum class ErrorKind {
  DegenerateBasis,
  InvalidResolution,
  MeshQualityError,
  NonClosedSurface,
  MissingFrames,
  SolverNoConvergence,
  AmbiguousKernel,
  DegenerateCell,
  InvalidNormal,
  MissingCurvatureData,
  HolonomyResidualTooLarge,
  NonWellCenteredMesh,
  NonClosedComplex,
  ConfigError,
  IoError,
};

const char* errorKindName(ErrorKind kind);

// All library failures carry a machine-readable kind next to the message.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(errorKindName(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace g2cal
