#pragma once

// Nodal derivative operators. Periodic grids use central differences; tetrahedral
// meshes and triangulated surfaces use weighted quadratic least-squares fits.

#include "g2cal/mesh.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <vector>

namespace g2cal {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Difference stencil at one node: derivative = sum_k coeff(:,k) * (f(nodes[k]) - f(centre)).
struct Stencil {
  std::vector<int> nodes;
  Eigen::MatrixXd coeff;
  double condition = 0.0;
};

/// Derivatives along the tangent frame e1, e2, e3 at every node.
class NodalGradient {
public:
  explicit NodalGradient(const Domain& domain);

  const SparseMatrix& operator[](int a) const { return g_[a]; }
  /// Nodes whose 1-ring fit was too small or ill-conditioned and used a wider ring.
  int widenedStencils() const { return widened_; }

  /// Derivative of each column of `values` (nodes x k) along e_a, evaluated in
  /// difference form so constant columns give exact zeros.
  Eigen::MatrixXd differentiate(int a, const Eigen::MatrixXd& values) const;
  const Stencil& stencil(int node) const { return stencils_[node]; }

private:
  std::vector<Stencil> stencils_;
  std::array<SparseMatrix, 3> g_;
  int widened_ = 0;
};

/// Derivatives along the boundary frame directions v and w at every surface vertex.
class SurfaceGradient {
public:
  explicit SurfaceGradient(const SurfaceMesh& surface);

  const SparseMatrix& alongV() const { return dv_; }
  const SparseMatrix& alongW() const { return dw_; }
  /// Derivatives along v (which = 0) or w (which = 1), in difference form.
  Eigen::MatrixXd differentiate(int which, const Eigen::MatrixXd& values) const;
  /// Derivative at a single vertex along cos(t) v + sin(t) w of a field sampled at all vertices.
  Eigen::RowVectorXd derivativeAt(int vertex, const Eigen::MatrixXd& values, double angle) const;
  const Stencil& stencil(int vertex) const { return stencils_[vertex]; }

private:
  std::vector<Stencil> stencils_;
  SparseMatrix dv_, dw_;
};

} // namespace g2cal
