#pragma once

// Calibration algebra of flat R^7: the 3-form phi, its Hodge dual, the
// cross product and the associator.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace g2cal {

using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat4 = Eigen::Matrix4d;

/// Standard basis vector e_i of R^7, 0-based.
Vec7 basisVector(int i);

class CalibrationAlgebra {
public:
  /// phi = e123 + e145 + e167 + e246 - e257 - e347 - e356 (1-based indices),
  /// orientation e1 ^ ... ^ e7 = +1.
  static const CalibrationAlgebra& standard();

  double phi(int i, int j, int k) const { return phi_[idx3(i, j, k)]; }
  double starPhi(int i, int j, int k, int l) const { return starPhi_[idx4(i, j, k, l)]; }
  const Vec7& crossTable(int i, int j) const { return crossTable_[i * 7 + j]; }

  double phi(const Vec7& u, const Vec7& v, const Vec7& w) const;
  double starPhi(const Vec7& u, const Vec7& v, const Vec7& w, const Vec7& eta) const;

  Vec7 cross(const Vec7& u, const Vec7& v) const;

  /// Associator, defined through <chi(u,v,w), eta> = *phi(u,v,w,eta).
  Vec7 chi(const Vec7& u, const Vec7& v, const Vec7& w) const;

private:
  CalibrationAlgebra();

  static int idx3(int i, int j, int k) { return (i * 7 + j) * 7 + k; }
  static int idx4(int i, int j, int k, int l) { return ((i * 7 + j) * 7 + k) * 7 + l; }

  std::array<double, 343> phi_{};
  std::array<double, 2401> starPhi_{};
  std::array<Vec7, 49> crossTable_;
};

inline Vec7 cross(const Vec7& u, const Vec7& v) { return CalibrationAlgebra::standard().cross(u, v); }
inline Vec7 chi(const Vec7& u, const Vec7& v, const Vec7& w) {
  return CalibrationAlgebra::standard().chi(u, v, w);
}

/// Algebraic associator -u x (v x w) - <u,v> w + <u,w> v. Kept separate from chi()
/// so the two can be checked against each other.
Vec7 chiFromCrossProducts(const Vec7& u, const Vec7& v, const Vec7& w);

enum class PlaneKind { Associative3, Coassociative4 };

struct PlaneClassification {
  bool flag = false;
  double residual = 0.0;
};

/// Orthonormalizes the basis, then measures |chi| (associative) or max |phi| over
/// triples (coassociative). Throws DegenerateBasis when the Gram determinant < 1e-12.
PlaneClassification classifyPlane(std::span<const Vec7> basis, PlaneKind kind);

/// Matrix of (e_i x .) acting on span(e4..e7), in that basis (0-based i in 0..2).
Mat4 tangentActionOnNormal(int i);

/// Matrix of (t x .) on span(e4..e7) for a tangent vector t in span(e1,e2,e3).
Mat4 crossActionOnNormal(const Eigen::Vector3d& t);

/// Principal symbol of the deformation operator: s -> s x xi on the normal space.
Mat4 symbol(const Eigen::Vector3d& xi);

} // namespace g2cal
