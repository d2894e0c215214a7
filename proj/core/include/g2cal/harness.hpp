#pragma once

// Subcommand dispatch shared by the g2cal tool and the regression tests.

#include "g2cal/g2_algebra.hpp"
#include "g2cal/report.hpp"

#include <optional>
#include <string>

namespace g2cal {

struct RunConfig {
  std::string command; // algebra-check, mesh, simons, dirac, boundary, cy, certify-ball, certify-torus, certify-cy
  std::string task;    // subcommand-specific
  std::string meshPath;
  std::string outPath;    // report (mesh JSON for `mesh`)
  std::string csvPath;    // spectra
  std::string kind = "ball"; // torus | ball | sphere3 | simplex
  std::string shape = "round";
  std::string bc = "none";   // none | nu_x | mu_x
  std::string fixture = "all"; // cy: t3 | s3 | s1xs2 | simplex | all
  int n = 8;      // torus grid size
  int refine = 3; // ball refinement
  int m = 4;      // sphere / cubical fixture resolution
  int count = 8;  // eigenvalues to report
  int trials = 0; // 0 = per-command default
  Vec7 e = basisVector(3);
  std::optional<double> absTol;
  double gapRatio = 50.0;
  double identityTol = 1e-12;
  unsigned seed = 7;
  bool timing = false;

  /// Throws ConfigError on invalid values.
  void validate() const;
};

/// Runs one subcommand. Module errors propagate as g2cal::Error.
Report run(const RunConfig& config);

/// Applies G2CAL_THREADS (if set) to OpenMP and Eigen; returns the thread cap in effect.
int configureThreads();

} // namespace g2cal
