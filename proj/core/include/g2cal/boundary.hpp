#pragma once

// Boundary bundles nu_X = span(e, n x e) and mu_X = its complement in nu, the
// boundary operator D_L, discrete Chern numbers, the index formula and the
// rigidity verdict.

#include "g2cal/dirac.hpp"
#include "g2cal/geometry.hpp"
#include "g2cal/mesh.hpp"

#include <string>
#include <vector>

namespace g2cal {

enum class BundleKind { NuX, MuX, Tangent };
const char* bundleName(BundleKind kind);

/// Per surface vertex, an oriented orthonormal pair (f, n x f) of each plane field.
using PlaneField = std::vector<std::array<Vec7, 2>>;

struct BoundaryBundles {
  Vec7 e = Vec7::Zero();
  PlaneField nu, mu, tangent;
  double maxInvarianceError = 0.0;   // max |n x (n x f) + f|
  double maxOrthogonalityError = 0.0; // max |<nu_a, mu_b>|

  const PlaneField& planes(BundleKind kind) const;
};

/// Surface of a flat domain in R^3 x {0}. Throws InvalidNormal unless e is a unit
/// vector orthogonal to R^3, and MissingFrames without boundary frames.
BoundaryBundles decomposeBoundaryBundles(const SurfaceMesh& surface, const Vec7& e);
BoundaryBundles decomposeBoundaryBundles(const Domain& domain, const Vec7& e);

/// Pointwise constraint psi in nu_X or mu_X at every boundary node.
BoundaryCondition makeBoundaryCondition(const Domain& domain, const BoundaryBundles& bundles, BundleKind kind);

struct DLField {
  std::vector<Eigen::Matrix2d> raw;       // <f_b, v x d_w g_a - w x d_v g_a> before symmetrization
  std::vector<Eigen::Matrix2d> matrix;    // symmetrized
  std::vector<Eigen::Vector2d> eigenvalues; // ascending
  std::vector<double> trace;
  std::vector<double> asymmetry;
  double maxAsymmetry = 0.0;

  double minEigenvalue() const;
  int argMinEigenvalue() const;
};

/// D_L on the frame sections of L, using local extensions g_a(j) = pi_{L_j} f_a(i) and
/// surface least-squares derivatives. `frameAngle` rotates (v, w) before assembly.
/// Throws MissingCurvatureData.
DLField assembleDL(const SurfaceMesh& surface, const BoundaryBundles& bundles, BundleKind kind,
                   double frameAngle = 0.0);

/// pi_L(v x d_w psi - w x d_v psi) for an arbitrary section given at every vertex.
std::vector<Vec7> applyDL(const SurfaceMesh& surface, const BoundaryBundles& bundles, BundleKind kind,
                          const std::vector<Vec7>& section);

struct ChernResult {
  int c1 = 0;
  double raw = 0.0;      // sum of triangle holonomies / 2 pi
  double residual = 0.0; // |raw - c1|
};

/// Sum over triangles of the projection-transport holonomy angle, triangles traversed
/// in the orientation of the complex structure J = n x (inner normal). Throws
/// HolonomyResidualTooLarge when the rounding residual is >= 0.1.
ChernResult chernNumber(const SurfaceMesh& surface, const PlaneField& planes);

struct IndexResult {
  int index = 0;
  int genus = 0;
  ChernResult chern; // of the bundle playing nu_X
  bool productModel = false;
};

/// index = c1(nu_X) + 1 - g. In the Calabi-Yau product model (e = d/dt) the roles of
/// the two planes are exchanged: nu_X of the product is mu_X(e).
IndexResult indexFormula(const SurfaceMesh& surface, const BoundaryBundles& bundles, bool productModel = false);

enum class Verdict { SmoothModuli, Inconclusive };
const char* verdictName(Verdict v);

struct RigidityReport {
  Verdict verdict = Verdict::Inconclusive;
  double minDLMu = 0.0;
  int minDLMuVertex = -1;
  double minNormalEigenvalue = 0.0;
  int minNormalNode = -1;
  bool flatBranch = false;
  int expectedDimension = 0;
  std::string reason;
};

RigidityReport rigidityReport(const DLField& dlMu, const SimonsField& simons, int index);

struct BochnerTerms {
  double gradient = 0.0;  // int |grad psi|^2
  double curvature = 0.0; // int <R_nu psi, psi>
  double boundary = 0.0;  // boundary integral of <B psi, psi>
  double normSquared = 0.0;
  double residual() const { return std::abs(gradient + curvature + boundary); }
  double relative() const { return normSquared > 0 ? residual() / normSquared : 0.0; }
};

/// Three-term integral identity for D psi = 0. The boundary integrand is
/// <v x d_w psi - w x d_v psi, psi>, projected to L when `kind` is given.
BochnerTerms boundaryBochner(const AssembledOperator& op, const SimonsField* simons, const NormalField& psi,
                             const BoundaryBundles* bundles = nullptr, const BundleKind* kind = nullptr);

/// Basis of the 8-dimensional space of linear fields psi = sum_k x_k g_k with
/// sum_k sigma_k g_k = 0 (each column holds g_1, g_2, g_3 stacked).
Eigen::MatrixXd linearHarmonicCoefficients();
NormalField linearField(const Domain& domain, const Eigen::VectorXd& stacked);

} // namespace g2cal
