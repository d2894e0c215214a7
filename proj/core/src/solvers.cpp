#include "g2cal/solvers.hpp"

#include "g2cal/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseQR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace g2cal {

namespace {

Eigen::MatrixXd randomBlock(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) X(i, j) = normal(rng);
  return X;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& X) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  return qr.householderQ() * Eigen::MatrixXd::Identity(X.rows(), X.cols());
}

} // namespace

double largestSingularValue(const SparseMatrix& A) {
  Eigen::VectorXd x = randomBlock(A.cols(), 1, 7).col(0);
  x.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 300; ++it) {
    Eigen::VectorXd y = A.transpose() * (A * x);
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    x = y / norm;
    if (it > 10 && std::abs(next - sigma) <= 1e-10 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

SingularValues smallestSingularValues(const SparseMatrix& A, int count, bool wantVectors) {
  SingularValues out;
  const Eigen::Index n = A.cols();
  count = static_cast<int>(std::min<Eigen::Index>(count, n));

  if (n < kDenseLimit) {
    const Eigen::MatrixXd dense(A);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(dense, wantVectors ? Eigen::ComputeThinV : 0);
    Eigen::VectorXd sv = Eigen::VectorXd::Zero(n);
    sv.head(svd.singularValues().size()) = svd.singularValues();
    out.largest = sv.size() ? sv(0) : 0.0;
    out.values = sv.reverse().head(count);
    if (wantVectors) {
      Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, n);
      V.leftCols(svd.matrixV().cols()) = svd.matrixV();
      if (svd.matrixV().cols() < n) {
        // Wide matrix: complete V with an orthonormal basis of the remaining directions.
        Eigen::FullPivLU<Eigen::MatrixXd> lu(svd.matrixV().transpose());
        const Eigen::MatrixXd nullBasis = orthonormalize(lu.kernel());
        V.rightCols(nullBasis.cols()) = nullBasis;
      }
      out.rightVectors = V.rowwise().reverse().leftCols(count);
    }
    out.dense = true;
    return out;
  }

  out.largest = largestSingularValue(A);
  const double delta = 1e-10 * out.largest * out.largest;
  SparseMatrix M = SparseMatrix(A.transpose()) * A;
  SparseMatrix shift(n, n);
  shift.setIdentity();
  M += delta * shift;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(M);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::SolverNoConvergence, "LDLT factorization failed");

  const int block = count + 6;
  Eigen::MatrixXd X = orthonormalize(randomBlock(n, block, 12345));
  Eigen::VectorXd sigma;
  const double tol = 1e-10 * out.largest * out.largest;
  for (int it = 1; it <= 2000; ++it) {
    X = orthonormalize(ldlt.solve(X));
    const Eigen::MatrixXd B = A * X;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinV);
    // Ascending Ritz values and vectors.
    sigma = svd.singularValues().reverse();
    X = X * svd.matrixV().rowwise().reverse();
    const Eigen::MatrixXd AX = A * X.leftCols(count);
    const Eigen::MatrixXd R = A.transpose() * AX - X.leftCols(count) * sigma.head(count).cwiseAbs2().asDiagonal();
    double worst = 0.0;
    for (int j = 0; j < count; ++j) worst = std::max(worst, R.col(j).norm());
    out.iterations = it;
    if (worst <= tol) {
      out.values = sigma.head(count);
      if (wantVectors) out.rightVectors = X.leftCols(count);
      return out;
    }
  }
  std::ostringstream msg;
  msg << "subspace iteration did not converge in 2000 steps (n=" << n << ", count=" << count
      << ", current smallest=" << sigma.head(std::min<Eigen::Index>(3, sigma.size())).transpose() << ")";
  throw Error(ErrorKind::SolverNoConvergence, msg.str());
}

Eigen::VectorXd smallestMagnitudeEigenvalues(const SparseMatrix& symmetric, int count) {
  const Eigen::Index n = symmetric.rows();
  Eigen::VectorXd lambda;
  if (n < kDenseLimit || count <= 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(symmetric), Eigen::EigenvaluesOnly};
    lambda = eig.eigenvalues();
  } else {
    // Invariant subspace of A^2 for its smallest eigenvalues, then Rayleigh-Ritz with A.
    const SparseMatrix A2 = symmetric * symmetric;
    const SingularValues sv = smallestSingularValues(A2, count + 4, true);
    const Eigen::MatrixXd& V = sv.rightVectors;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(V.transpose() * (symmetric * V), Eigen::EigenvaluesOnly);
    lambda = eig.eigenvalues();
  }
  std::vector<Eigen::Index> order(lambda.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(lambda(a)) != std::abs(lambda(b))) return std::abs(lambda(a)) < std::abs(lambda(b));
    return lambda(a) < lambda(b);
  });
  const Eigen::Index m = count <= 0 ? lambda.size() : std::min<Eigen::Index>(count, lambda.size());
  Eigen::VectorXd out(m);
  for (Eigen::Index i = 0; i < m; ++i) out(i) = lambda(order[i]);
  return out;
}

KernelEstimate analyzeKernel(const SparseMatrix& A, std::optional<double> absTol, double gapRatio, int count) {
  if (absTol && !(*absTol > 0)) throw Error(ErrorKind::ConfigError, "abs_tol must be positive");
  if (!(gapRatio > 1)) throw Error(ErrorKind::ConfigError, "gap_ratio must exceed 1");
  const SingularValues sv = smallestSingularValues(A, count, true);
  KernelEstimate out;
  out.opNorm = sv.largest;
  out.absTol = absTol.value_or(1e-6 * sv.largest);
  out.singularValues = sv.values;
  const Eigen::Index m = sv.values.size();
  while (out.dim < m && sv.values(out.dim) < out.absTol) ++out.dim;
  if (out.dim == m) {
    out.gap = 1.0;
    out.ambiguous = true;
  } else if (out.dim == 0) {
    out.gap = sv.values(0) / out.absTol;
  } else {
    const double floor = std::numeric_limits<double>::epsilon() * std::max(out.opNorm, 1.0);
    out.gap = sv.values(out.dim) / std::max(sv.values(out.dim - 1), floor);
  }
  if (!(out.gap > gapRatio)) out.ambiguous = true;
  out.basis = sv.rightVectors.leftCols(out.dim);
  return out;
}

KernelEstimate detectKernel(const SparseMatrix& A, std::optional<double> absTol, double gapRatio, int count) {
  KernelEstimate k = analyzeKernel(A, absTol, gapRatio, count);
  if (k.ambiguous) {
    std::ostringstream msg;
    msg << "no clear spectral gap: " << k.dim << " singular values below " << k.absTol << ", gap ratio " << k.gap
        << " <= " << gapRatio << "; candidate dimensions " << k.dim << " and "
        << std::min<Eigen::Index>(k.dim + 1, k.singularValues.size()) << "; smallest values "
        << k.singularValues.transpose();
    throw Error(ErrorKind::AmbiguousKernel, msg.str());
  }
  return k;
}

int matrixRank(const SparseMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  if (std::max(A.rows(), A.cols()) < 4000) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(A)};
    qr.setThreshold(1e-9);
    return static_cast<int>(qr.rank());
  }
  SparseMatrix compressed = A;
  compressed.makeCompressed();
  Eigen::SparseQR<SparseMatrix, Eigen::COLAMDOrdering<int>> qr;
  qr.setPivotThreshold(1e-9);
  qr.compute(compressed);
  return static_cast<int>(qr.rank());
}

} // namespace g2cal
