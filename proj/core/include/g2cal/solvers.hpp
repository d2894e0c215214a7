#pragma once

// Small-singular-value and kernel estimation for sparse operators.

#include "g2cal/gradients.hpp"

#include <Eigen/Core>

#include <optional>

namespace g2cal {

/// Dense factorizations are used below this many unknowns.
inline constexpr int kDenseLimit = 6000;

struct SingularValues {
  Eigen::VectorXd values;       // ascending
  Eigen::MatrixXd rightVectors; // one column per value (only when requested)
  double largest = 0.0;         // operator 2-norm estimate
  bool dense = false;
  int iterations = 0;
};

/// The `count` smallest singular values of A (rows >= cols expected).
/// Iterative path: shift-invert subspace iteration on A^T A + delta I with
/// Rayleigh-Ritz through the SVD of A V. Throws SolverNoConvergence.
SingularValues smallestSingularValues(const SparseMatrix& A, int count, bool wantVectors = false);

/// Power-iteration estimate of the largest singular value.
double largestSingularValue(const SparseMatrix& A);

/// Eigenvalues of a symmetric matrix, `count` smallest in magnitude, sorted by |lambda|
/// (count <= 0 returns all of them; dense path only).
Eigen::VectorXd smallestMagnitudeEigenvalues(const SparseMatrix& symmetric, int count);

struct KernelEstimate {
  int dim = 0;
  double gap = 0.0;   // sigma_{dim+1} / sigma_dim, or sigma_1 / absTol when dim = 0
  double absTol = 0.0;
  double opNorm = 0.0;
  bool ambiguous = false;
  Eigen::VectorXd singularValues;
  Eigen::MatrixXd basis; // right singular vectors of the kernel
};

/// Counts singular values below absTol (default 1e-6 * ||A||) and measures the gap.
/// Never throws on an unclear gap; sets `ambiguous` instead.
KernelEstimate analyzeKernel(const SparseMatrix& A, std::optional<double> absTol, double gapRatio, int count = 8);

/// analyzeKernel(), throwing AmbiguousKernel when the gap is not larger than gapRatio.
KernelEstimate detectKernel(const SparseMatrix& A, std::optional<double> absTol, double gapRatio, int count = 8);

/// Numerical rank (integer-valued matrices in practice).
int matrixRank(const SparseMatrix& A);

} // namespace g2cal
