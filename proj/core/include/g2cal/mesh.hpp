#pragma once

// Discretized flat model domains: the periodic 3-torus grid and tetrahedral
// balls in R^3 x {0}, plus the closed surfaces bounding them.

#include "g2cal/g2_algebra.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace g2cal {

using Vec3 = Eigen::Vector3d;

/// Closed triangulated surface in R^3. Triangles are stored counter-clockwise seen
/// from outside; all frame data below refers to the inner normal.
struct SurfaceMesh {
  std::vector<Vec3> points;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> volumeNode; // owning domain node of each vertex (empty for standalone surfaces)

  // Filled by computeBoundaryFrames().
  std::vector<Vec3> normal; // inner unit normal n
  std::vector<Vec3> v, w;   // principal directions, w = n x v
  std::vector<double> kv, kw, meanCurvature;
  std::vector<double> area;      // barycentric vertex area
  std::vector<Vec3> areaNormal;  // sum over incident faces of area/3 * inner face normal
  double meanEdge = 0.0;

  int vertexCount() const { return static_cast<int>(points.size()); }
  bool hasFrames() const { return !normal.empty(); }
  bool hasCurvature() const { return !kv.empty(); }
};

enum class DomainKind { PeriodicGrid, BallMesh, TetMesh };

struct Domain {
  DomainKind kind = DomainKind::TetMesh;
  std::string label;
  int gridN = 0;        // PeriodicGrid only
  int refinement = 0;   // BallMesh only
  std::string shape;    // BallMesh only
  double spacing = 0.0; // grid step, or mean edge length

  std::vector<Vec7> nodes;
  std::vector<std::array<int, 4>> cells;
  std::vector<std::array<Vec7, 3>> tangentFrame;
  std::vector<std::array<Vec7, 4>> normalFrame;
  std::optional<SurfaceMesh> boundary;

  int nodeCount() const { return static_cast<int>(nodes.size()); }
  bool hasFrames() const {
    return tangentFrame.size() == nodes.size() && normalFrame.size() == nodes.size() && !nodes.empty();
  }
  /// Grid node index of (i1, i2, i3), periodic.
  int gridIndex(int i1, int i2, int i3) const;
};

/// Unit direction -> boundary radius.
using RadiusFn = std::function<double(const Vec3&)>;

RadiusFn roundShape(double radius);
RadiusFn ellipsoidShape(const Vec3& axes);
/// Unit sphere with a smooth inward dent around +e3; not convex.
RadiusFn dentedShape();
/// "round", "round2" (radius 2), "ellipsoid" (axes 1,1,0.5), "dented".
RadiusFn shapeByName(const std::string& name);

/// N^3 nodes on [0,1)^3 x {0}, h = 1/N. Throws InvalidResolution if N < 4.
Domain buildTorusGrid(int n);

/// Icosahedral ball template refined `refinement` times (red refinement), mapped
/// radially onto {r <= radius(x/|x|)}. Boundary frames and curvatures are filled.
Domain buildBallMesh(const RadiusFn& radius, int refinement, const std::string& shapeName = "custom");

/// Rebuilds derived data (boundary surface, frames) after nodes/cells were set.
void finalizeTetDomain(Domain& domain, const std::vector<std::array<int, 3>>& boundaryTriangles);

/// Signed tetrahedron volumes (positive for the stored orientation).
std::vector<double> tetVolumes(const Domain& domain);

/// Lumped nodal quadrature weights: h^3 on the grid, sum of vol/4 on tet meshes.
Eigen::VectorXd nodalWeights(const Domain& domain);

/// Edge graph of a tetrahedral mesh.
std::vector<std::vector<int>> nodeNeighbors(const Domain& domain);

struct FrameCheck {
  double orthonormality = 0.0;  // max |<e_a,e_b> - delta_ab| over tangent and normal frames
  double crossConsistency = 0.0; // max |e3 - e1 x e2|
  double normalTangent = 0.0;    // max |<n_k, e_a>|
  bool associative = true;       // every tangent plane classifies associative
};
FrameCheck checkFrames(const Domain& domain);

/// Surface boundary normals n (inner), principal curvatures and frames (n, v, w = n x v)
/// by iterated quadratic height fitting over 2-rings.
void computeBoundaryFrames(SurfaceMesh& surface);

std::vector<std::vector<int>> vertexNeighbors(const SurfaceMesh& surface);
/// Vertices within `rings` edge hops, excluding the centre.
std::vector<int> ringNeighborhood(const std::vector<std::vector<int>>& adjacency, int centre, int rings);

/// g = (2 - (V - E + F)) / 2. Throws NonClosedSurface if an edge is not shared by exactly two triangles.
int eulerGenus(const SurfaceMesh& surface);

inline Vec7 lift(const Vec3& x) {
  Vec7 y = Vec7::Zero();
  y.head<3>() = x;
  return y;
}

} // namespace g2cal
