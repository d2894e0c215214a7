#pragma once

// Test fixtures beyond the flat ball and torus: closed surfaces of higher genus
// and closed 3-manifolds used by the curvature and Hodge checks.

#include "g2cal/mesh.hpp"

namespace g2cal {

/// Torus of revolution (major radius R, tube radius r), nu x nv vertex grid.
/// Frames and curvatures are computed.
SurfaceMesh torusOfRevolution(double majorRadius, double minorRadius, int nu, int nv);

/// Boundary of a union of unit voxels, each face cut into subdivisions^2 quads and
/// each quad split in two triangles. No frames.
SurfaceMesh voxelSurface(const std::vector<std::array<int, 3>>& cubes, int subdivisions = 1);

/// Voxel slab with two holes (boundary genus 2), subdivided and smoothed; frames and
/// curvatures are computed.
SurfaceMesh genusTwoSurface(int subdivisions = 4, int smoothingSteps = 30);

/// Round S^3 of radius r in span(e1..e4): boundary of the 4-cube with m cells per
/// edge, Kuhn-split into tetrahedra and projected radially. Tangent frame from left
/// quaternion multiplication; normal frame (x/r, R(x)e5, R(x)e6, R(x)e7) where R is a
/// position-dependent rotation of angle scale `twist` (0 gives constant e5..e7).
Domain buildSphere3(double radius, int m, double twist = 0.0);

/// Boundary of the regular 4-simplex (5 tetrahedra), embedded in span(e1..e5).
Domain buildSimplexBoundary();

} // namespace g2cal
