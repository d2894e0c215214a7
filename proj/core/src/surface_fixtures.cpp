#include "g2cal/surface_fixtures.hpp"

#include "g2cal/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace g2cal {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SurfaceMesh torusOfRevolution(double majorRadius, double minorRadius, int nu, int nv) {
  if (nu < 3 || nv < 3) throw Error(ErrorKind::InvalidResolution, "torus surface needs at least 3x3 vertices");
  SurfaceMesh s;
  auto id = [&](int i, int j) { return ((i + nu) % nu) * nv + (j + nv) % nv; };
  for (int i = 0; i < nu; ++i) {
    const double u = 2 * kPi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = 2 * kPi * j / nv;
      const double rho = majorRadius + minorRadius * std::cos(v);
      s.points.emplace_back(rho * std::cos(u), rho * std::sin(u), minorRadius * std::sin(v));
    }
  }
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      s.triangles.push_back({a, b, c});
      s.triangles.push_back({a, c, d});
    }
  // Orient outward: compare the first face normal with the tube-centre direction.
  const auto& f = s.triangles.front();
  const Vec3 centroid = (s.points[f[0]] + s.points[f[1]] + s.points[f[2]]) / 3.0;
  const Vec3 tubeCentre = majorRadius * Vec3(centroid.x(), centroid.y(), 0.0).normalized();
  const Vec3 normal = (s.points[f[1]] - s.points[f[0]]).cross(s.points[f[2]] - s.points[f[0]]);
  if (normal.dot(centroid - tubeCentre) < 0)
    for (auto& t : s.triangles) std::swap(t[1], t[2]);
  computeBoundaryFrames(s);
  return s;
}

SurfaceMesh voxelSurface(const std::vector<std::array<int, 3>>& cubes, int subdivisions) {
  if (subdivisions < 1) throw Error(ErrorKind::InvalidResolution, "voxel subdivisions must be >= 1");
  const int k = subdivisions;
  const std::set<std::array<int, 3>> filled(cubes.begin(), cubes.end());
  std::map<std::array<int, 3>, int> vertexId; // keys on the lattice refined k times
  SurfaceMesh s;
  auto vertex = [&](std::array<int, 3> p) {
    auto [it, inserted] = vertexId.emplace(p, static_cast<int>(s.points.size()));
    if (inserted) s.points.emplace_back(double(p[0]) / k, double(p[1]) / k, double(p[2]) / k);
    return it->second;
  };
  for (const auto& c : cubes) {
    for (int axis = 0; axis < 3; ++axis) {
      for (int side : {0, 1}) {
        auto nb = c;
        nb[axis] += side ? 1 : -1;
        if (filled.count(nb)) continue;
        const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) {
            std::array<std::array<int, 3>, 4> quad;
            for (int r = 0; r < 4; ++r) {
              for (int d = 0; d < 3; ++d) quad[r][d] = k * c[d];
              quad[r][axis] += k * side;
              quad[r][a1] += i;
              quad[r][a2] += j;
            }
            quad[1][a1] += 1;
            quad[2][a1] += 1;
            quad[2][a2] += 1;
            quad[3][a2] += 1;
            std::array<int, 4> q{vertex(quad[0]), vertex(quad[1]), vertex(quad[2]), vertex(quad[3])};
            // (a1, a2, axis) is right-handed, so this quad is counter-clockwise seen from +axis.
            if (side == 1) {
              s.triangles.push_back({q[0], q[1], q[2]});
              s.triangles.push_back({q[0], q[2], q[3]});
            } else {
              s.triangles.push_back({q[0], q[2], q[1]});
              s.triangles.push_back({q[0], q[3], q[2]});
            }
          }
      }
    }
  }
  return s;
}

SurfaceMesh genusTwoSurface(int subdivisions, int smoothingSteps) {
  std::vector<std::array<int, 3>> cubes;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 5; ++j)
      if (!(i == 1 && (j == 1 || j == 3))) cubes.push_back({i, j, 0});
  SurfaceMesh s = voxelSurface(cubes, subdivisions);
  // Taubin smoothing (lambda, mu) rounds the edges without shrinking the solid.
  const auto adjacency = vertexNeighbors(s);
  for (int step = 0; step < 2 * smoothingSteps; ++step) {
    const double factor = step % 2 == 0 ? 0.5 : -0.53;
    std::vector<Vec3> next = s.points;
    for (int i = 0; i < s.vertexCount(); ++i) {
      Vec3 mean = Vec3::Zero();
      for (int j : adjacency[i]) mean += s.points[j];
      mean /= static_cast<double>(adjacency[i].size());
      next[i] += factor * (mean - s.points[i]);
    }
    s.points = std::move(next);
  }
  computeBoundaryFrames(s);
  return s;
}

Domain buildSphere3(double radius, int m, double twist) {
  if (m < 2) throw Error(ErrorKind::InvalidResolution, "S^3 fixture needs m >= 2");
  Domain domain;
  domain.kind = DomainKind::TetMesh;
  domain.label = "s3";

  std::map<std::array<int, 4>, int> ids;
  auto node = [&](const std::array<int, 4>& k) {
    auto [it, inserted] = ids.emplace(k, static_cast<int>(domain.nodes.size()));
    if (inserted) {
      Eigen::Vector4d x;
      for (int a = 0; a < 4; ++a) x(a) = -1.0 + 2.0 * k[a] / m;
      x *= radius / x.norm();
      Vec7 p = Vec7::Zero();
      p.head<4>() = x;
      domain.nodes.push_back(p);
    }
    return it->second;
  };

  for (int d = 0; d < 4; ++d) {
    std::array<int, 3> free{};
    for (int a = 0, c = 0; a < 4; ++a)
      if (a != d) free[c++] = a;
    for (int s : {0, m})
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) {
            std::array<int, 4> base{};
            base[d] = s;
            base[free[0]] = i;
            base[free[1]] = j;
            base[free[2]] = k;
            std::array<int, 3> perm{0, 1, 2};
            do {
              std::array<int, 4> cur = base;
              std::array<int, 4> tet{};
              tet[0] = node(cur);
              for (int step = 0; step < 3; ++step) {
                cur[free[perm[step]]] += 1;
                tet[step + 1] = node(cur);
              }
              domain.cells.push_back(tet);
            } while (std::next_permutation(perm.begin(), perm.end()));
          }
  }

  const int n = domain.nodeCount();
  domain.tangentFrame.resize(n);
  domain.normalFrame.resize(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector4d x = domain.nodes[i].head<4>() / radius;
    // Left multiplication by i, j, k on x = x0 + x1 i + x2 j + x3 k.
    const Eigen::Vector4d ix(-x(1), x(0), -x(3), x(2));
    const Eigen::Vector4d jx(-x(2), x(3), x(0), -x(1));
    const Eigen::Vector4d kx(-x(3), -x(2), x(1), x(0));
    for (int a = 0; a < 3; ++a) domain.tangentFrame[i][a] = Vec7::Zero();
    domain.tangentFrame[i][0].head<4>() = ix;
    domain.tangentFrame[i][1].head<4>() = jx;
    domain.tangentFrame[i][2].head<4>() = kx;

    const Eigen::Matrix3d rot = (Eigen::AngleAxisd(twist * x(0), Eigen::Vector3d::UnitZ()) *
                                 Eigen::AngleAxisd(twist * x(1), Eigen::Vector3d::UnitX()))
                                    .toRotationMatrix();
    domain.normalFrame[i][0] = Vec7::Zero();
    domain.normalFrame[i][0].head<4>() = x;
    for (int k = 0; k < 3; ++k) {
      Vec7 eta = Vec7::Zero();
      eta.tail<3>() = rot.col(k);
      domain.normalFrame[i][k + 1] = eta;
    }
  }

  double total = 0.0;
  int count = 0;
  for (const auto& t : domain.cells)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        total += (domain.nodes[t[a]] - domain.nodes[t[b]]).norm();
        ++count;
      }
  domain.spacing = total / count;
  return domain;
}

Domain buildSimplexBoundary() {
  Domain domain;
  domain.kind = DomainKind::TetMesh;
  domain.label = "simplex4";
  for (int i = 0; i < 5; ++i) {
    Vec7 p = Vec7::Zero();
    for (int a = 0; a < 5; ++a) p(a) = (a == i ? 1.0 : 0.0) - 0.2;
    domain.nodes.push_back(p);
  }
  for (int skip = 0; skip < 5; ++skip) {
    std::array<int, 4> t{};
    for (int a = 0, c = 0; a < 5; ++a)
      if (a != skip) t[c++] = a;
    domain.cells.push_back(t);
  }
  domain.spacing = std::sqrt(2.0);
  return domain;
}

} // namespace g2cal
