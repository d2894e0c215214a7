#pragma once

// Discrete exterior calculus on closed 3-complexes and the form operator
// D(alpha, tau) = (-*d alpha - d tau, *d* alpha) of the Calabi-Yau product model.
//
// alpha is a primal 1-cochain, tau a dual 0-cochain (one value per top cell). The
// image is (dual 1-cochain on faces, primal 0-cochain on vertices).

#include "g2cal/gradients.hpp"
#include "g2cal/mesh.hpp"
#include "g2cal/solvers.hpp"

#include <array>
#include <optional>
#include <string>

namespace g2cal {

struct DECComplex {
  std::string label;
  std::array<int, 4> cellCount{}; // vertices, edges, faces, 3-cells
  SparseMatrix d0, d1, d2;        // coboundaries d_k : C^k -> C^{k+1}, integer entries
  std::array<Eigen::VectorXd, 4> star; // diagonal Hodge stars, dual / primal volume
};

/// Cubical complex of the periodic grid Z_n^3.
DECComplex buildCubicalTorus(int n);
/// Boundary of the 4-cube [0,m]^4 (a 3-sphere).
DECComplex buildCubicalSphere3(int m);
/// Boundary of [0,m]^3 times a circle of k cells.
DECComplex buildCubicalS1xS2(int m, int k);
/// Simplicial complex of a closed tetrahedral domain with signed circumcentric duals.
/// Throws NonWellCenteredMesh on non-positive dual volumes.
DECComplex buildSimplicialDec(const Domain& domain);
/// Periodic grids use the cubical torus; tetrahedral domains the simplicial complex.
/// Throws NonClosedComplex if some face does not bound exactly two 3-cells.
DECComplex buildDec(const Domain& domain);

/// Throws NonClosedComplex unless every face has exactly two cofaces.
void requireClosed(const DECComplex& dec);

/// (alpha, tau) -> (-*2 d1 alpha + d2^T tau, -*0^{-1} d0^T *1 alpha).
SparseMatrix assembleDvee(const DECComplex& dec);
/// Same formula on the dual complex: (beta, sigma) -> (-*1^{-1} d1^T beta - d0 sigma, *3 d2 *2^{-1} beta).
/// It is the adjoint of assembleDvee() for the star inner products.
SparseMatrix assembleDveeAdjoint(const DECComplex& dec);
/// Hodge Laplacian built from d and the codifferentials *^{-1} d^T *: the 1-form
/// Laplacian on alpha and the 3-form Laplacian, conjugated by *3, on tau.
SparseMatrix assembleHodgeLaplacian(const DECComplex& dec);

/// Symmetric realization W_out^{1/2} D W_in^{-1/2} whose singular values are analysed.
SparseMatrix weightedDvee(const DECComplex& dec);
/// Input weights (star_1 on edges, star_3^{-1} on cells).
Eigen::VectorXd dveeInputWeights(const DECComplex& dec);

struct DveeCheck {
  double ddResidual = 0.0;      // max |d1 d0|, |d2 d1| entries
  double squareResidual = 0.0;  // max over trials ||D'D x - Lap x|| / ||x||
  double tauBlockResidual = 0.0; // ||tau block of D'D - *3 d2 *2^{-1} d2^T||
  double pairingResidual = 0.0; // max |<Dx, y>_out - <x, D'y>_in| / (||x|| ||y||)
  double minStar = 0.0;
  int trials = 0;
};
DveeCheck dveeSquareCheck(const DECComplex& dec, int trials, unsigned seed);

struct Betti {
  std::array<int, 4> b{};
};
Betti betti(const DECComplex& dec);

struct CYKernel {
  KernelEstimate estimate;
  double decompositionResidual = 0.0; // kernel vectors: |d alpha| + |d* alpha| + |d~ tau| relative
};
/// Kernel of D with the gap rule of kernelDim(); throws AmbiguousKernel.
CYKernel cyKernelDim(const DECComplex& dec, std::optional<double> absTol = std::nullopt, double gapRatio = 50.0);

} // namespace g2cal
