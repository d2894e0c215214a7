#include "g2cal/errors.hpp"

namespace g2cal {

const char* errorKindName(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::DegenerateBasis: return "DegenerateBasis";
  case ErrorKind::InvalidResolution: return "InvalidResolution";
  case ErrorKind::MeshQualityError: return "MeshQualityError";
  case ErrorKind::NonClosedSurface: return "NonClosedSurface";
  case ErrorKind::MissingFrames: return "MissingFrames";
  case ErrorKind::SolverNoConvergence: return "SolverNoConvergence";
  case ErrorKind::AmbiguousKernel: return "AmbiguousKernel";
  case ErrorKind::DegenerateCell: return "DegenerateCell";
  case ErrorKind::InvalidNormal: return "InvalidNormal";
  case ErrorKind::MissingCurvatureData: return "MissingCurvatureData";
  case ErrorKind::HolonomyResidualTooLarge: return "HolonomyResidualTooLarge";
  case ErrorKind::NonWellCenteredMesh: return "NonWellCenteredMesh";
  case ErrorKind::NonClosedComplex: return "NonClosedComplex";
  case ErrorKind::ConfigError: return "ConfigError";
  case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

} // namespace g2cal
