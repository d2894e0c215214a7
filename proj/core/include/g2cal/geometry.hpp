#pragma once

// Second fundamental form and the Simons operators of a submanifold of flat R^7.

#include "g2cal/gradients.hpp"
#include "g2cal/mesh.hpp"

#include <array>
#include <vector>

namespace g2cal {

struct ShapeField {
  /// A[i][k](a, b) = <A_{eta_k} e_a, e_b> at node i, tangent frame coordinates.
  std::vector<std::array<Eigen::Matrix3d, 4>> A;
  double maxAsymmetry = 0.0; // before symmetrization
};

struct SimonsField {
  std::vector<Mat4> ambient;       // R, identically zero in flat ambient space
  std::vector<Mat4> shape;         // (A)_kl = tr(A_k A_l)
  std::vector<Mat4> normalOperator; // R_nu = R - A
  std::vector<double> minNormalEigenvalue;
  std::vector<double> minShapeEigenvalue;
  bool flat = false; // R_nu vanishes identically (totally geodesic flat case)

  double globalMinNormalEigenvalue() const;
  int argMinNormalEigenvalue() const;
};

/// A_{eta_k}(e_a) . e_b = -<d_a eta_k, e_b>, symmetrized. Throws MissingFrames.
ShapeField secondFundamentalForm(const Domain& domain);
ShapeField secondFundamentalForm(const Domain& domain, const NodalGradient& grad);

SimonsField simonsOperators(const Domain& domain, const ShapeField& shape);

/// Normal components of sum_a d_{e_a} e_a, from tangent-frame derivatives (4 per node).
std::vector<Eigen::Vector4d> meanCurvatureVector(const Domain& domain, const NodalGradient& grad);

struct RicciCheck {
  double maxResidual = 0.0;   // max |<R(e_a,e_b) eta_k, eta_m> - <[A_k, A_m] e_a, e_b>|
  double connectionScale = 0.0; // max |Omega| entry, for context
};

/// Normal curvature from finite differences of the connection forms
/// Omega_kl(X) = <d_X eta_k, eta_l>, compared with the Ricci equation (flat ambient).
RicciCheck ricciEquationResidual(const Domain& domain, const NodalGradient& grad, const ShapeField& shape);

} // namespace g2cal
