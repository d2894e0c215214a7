#pragma once

// The deformation operator D psi = sum_a e_a x d_a psi on sections of the normal
// bundle, its square, boundary conditions, spectra, kernels and residual checks.

#include "g2cal/geometry.hpp"
#include "g2cal/gradients.hpp"
#include "g2cal/mesh.hpp"
#include "g2cal/solvers.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace g2cal {

/// Section of the normal bundle: 4 coefficients per node in the normal frame,
/// unknown index 4 * node + c.
using NormalField = Eigen::VectorXd;

struct AssembledOperator {
  const Domain* domain = nullptr; // not owned; must outlive the operator
  std::shared_ptr<const NodalGradient> gradient;
  std::array<Mat4, 3> sigma;   // e_a x . on the normal space
  SparseMatrix matrix;         // sum_a G_a (x) sigma_a
  Eigen::VectorXd weights;     // nodal quadrature
  SparseMatrix leastSquares;   // tetrahedral meshes: P1 realization, 4 rows per cell
};

/// Pointwise constraint psi(node) in span(basis) at the listed boundary nodes.
struct BoundaryCondition {
  std::string name;
  std::vector<int> nodes;
  std::vector<Eigen::Matrix<double, 4, 2>> basis; // orthonormal, normal-frame coordinates

  Mat4 projector(std::size_t k) const { return basis[k] * basis[k].transpose(); }
};

/// Throws MissingFrames when the domain has no frames.
AssembledOperator assembleD(const Domain& domain);

/// D psi evaluated in difference form (constant sections map to exact zeros).
NormalField applyD(const AssembledOperator& op, const NormalField& psi);
/// Rough Laplacian -sum_a G_a G_a psi, componentwise.
NormalField applyRoughLaplacian(const AssembledOperator& op, const NormalField& psi);

/// Matrix of the operator whose singular values are reported:
///  - periodic grid: band-limited restriction (symmetric, boundary conditions rejected);
///  - tetrahedral mesh: L (W^{-1/2} (x) I) Q with Q the constrained basis.
SparseMatrix analyzedOperator(const AssembledOperator& op, const BoundaryCondition* bc);

/// Constrained basis: identity at free nodes, the 4x2 plane basis at constrained nodes.
SparseMatrix constraintBasis(int nodeCount, const BoundaryCondition& bc);

/// Torus: signed eigenvalues of smallest magnitude. Meshes: smallest singular values of
/// the symmetrized constrained operator.
std::vector<double> spectrum(const AssembledOperator& op, const BoundaryCondition* bc, int count);

/// Kernel dimension and gap; throws AmbiguousKernel. Default abs_tol = 1e-6 ||op||.
KernelEstimate kernelDim(const AssembledOperator& op, const BoundaryCondition* bc,
                         std::optional<double> absTol = std::nullopt, double gapRatio = 50.0, int count = 8);

/// Lifts a kernel basis vector of analyzedOperator() back to nodal values.
NormalField kernelVectorToField(const AssembledOperator& op, const BoundaryCondition* bc, const Eigen::VectorXd& x);

/// Band-limited subspace of the torus grid: Fourier modes with |k_j| <= (N-1)/2 per axis.
struct TorusBandLimit {
  int n = 0, k = 0, m = 0;        // grid size, max |k|, modes per axis (2K+1)
  Eigen::MatrixXd basis1d;        // N x m real orthonormal Fourier basis
  SparseMatrix difference1d;      // m x m restricted central difference
  SparseMatrix restricted;        // 4 m^3 square, sum_a K_a (x) sigma_a

  /// Nodal field from coefficients in the band-limited basis.
  NormalField embed(const Eigen::VectorXd& coefficients) const;
};
TorusBandLimit torusBandLimit(const AssembledOperator& op);

/// Discrete L2 norm with nodal weights, optionally restricted to a node mask.
double weightedNorm(const AssembledOperator& op, const NormalField& psi, const std::vector<char>* mask = nullptr);

/// ||D^2 psi - (rough Laplacian + R_nu) psi|| / ||psi||, over masked nodes if given.
double weitzenboeckResidual(const AssembledOperator& op, const SimonsField* simons, const NormalField& psi,
                            const std::vector<char>* mask = nullptr);

/// |int <D psi, psi> - ... |: closed Bochner integral sum |grad psi|^2 - <D^2 psi, psi> + <R_nu psi, psi>.
double closedBochnerResidual(const AssembledOperator& op, const SimonsField* simons, const NormalField& psi);

/// |int <Ds,s'> - <s,Ds'> + int_bdry <n x s, s'>| / (||s|| ||s'||).
double adjointnessResidual(const AssembledOperator& op, const NormalField& s, const NormalField& sPrime);

/// Associativity defect chi(t1,t2,t3)/|t1 ^ t2 ^ t3| of the embedding x + u with
/// t_a = e_a + d_a u. Throws DegenerateCell when the Gram determinant < 1e-12.
std::vector<Vec7> evaluateF(const Domain& domain, const NodalGradient& grad, const std::vector<Vec7>& displacement);

struct LinearizationSweep {
  std::vector<double> steps;
  std::vector<double> relativeErrors;
  double best = 0.0;
  double bestStep = 0.0;
};
/// Central finite differences of F along psi compared with D psi over a sweep of steps.
LinearizationSweep linearizationCheck(const AssembledOperator& op, const NormalField& psi,
                                      const std::vector<double>& steps);

/// Ambient vector field sum_k psi_k eta_k.
std::vector<Vec7> toAmbient(const Domain& domain, const NormalField& psi);

/// Deterministic smooth test field: sum of a few random sinusoids per component.
NormalField smoothRandomField(const Domain& domain, unsigned seed, int modes = 3);
/// Constant section with coefficients c.
NormalField constantField(const Domain& domain, const Eigen::Vector4d& c);
/// Random band-limited torus field with unit weighted norm.
NormalField bandLimitedRandomField(const AssembledOperator& op, const TorusBandLimit& band, unsigned seed);

/// Nodes with |x| < fraction * (smallest boundary radius).
std::vector<char> interiorMask(const Domain& domain, double fraction);

} // namespace g2cal
