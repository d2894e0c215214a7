#include "g2cal/mesh.hpp"

#include "g2cal/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace g2cal {

namespace {

constexpr double kPi = 3.14159265358979323846;

using EdgeKey = std::pair<int, int>;

EdgeKey edgeKey(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double signedVolume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

void setFlatFrames(Domain& domain) {
  const auto n = domain.nodes.size();
  domain.tangentFrame.assign(n, {basisVector(0), basisVector(1), basisVector(2)});
  domain.normalFrame.assign(n, {basisVector(3), basisVector(4), basisVector(5), basisVector(6)});
}

struct Icosahedron {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces; // outward
};

Icosahedron makeIcosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Icosahedron ico;
  for (double s1 : {-1.0, 1.0}) {
    for (double s2 : {-1.0, 1.0}) {
      ico.vertices.emplace_back(0.0, s1, s2 * phi);
      ico.vertices.emplace_back(s1, s2 * phi, 0.0);
      ico.vertices.emplace_back(s2 * phi, 0.0, s1);
    }
  }
  for (Vec3& p : ico.vertices) p.normalize();
  const double edge = (ico.vertices[0] - ico.vertices[3]).norm();
  double minEdge = 1e9;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = i + 1; j < 12; ++j) minEdge = std::min(minEdge, (ico.vertices[i] - ico.vertices[j]).norm());
  (void)edge;
  auto isEdge = [&](int i, int j) { return (ico.vertices[i] - ico.vertices[j]).norm() < minEdge * 1.01; };
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      for (int k = j + 1; k < 12; ++k) {
        if (!isEdge(i, j) || !isEdge(j, k) || !isEdge(i, k)) continue;
        const Vec3& a = ico.vertices[i];
        const Vec3& b = ico.vertices[j];
        const Vec3& c = ico.vertices[k];
        if ((b - a).cross(c - a).dot(a + b + c) > 0)
          ico.faces.push_back({i, j, k});
        else
          ico.faces.push_back({i, k, j});
      }
  return ico;
}

class MidpointCache {
public:
  explicit MidpointCache(std::vector<Vec3>& points) : points_(points) {}
  int operator()(int a, int b) {
    auto key = edgeKey(a, b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const int id = static_cast<int>(points_.size());
    points_.push_back(0.5 * (points_[a] + points_[b]));
    cache_.emplace(key, id);
    return id;
  }

private:
  std::vector<Vec3>& points_;
  std::map<EdgeKey, int> cache_;
};

} // namespace

int Domain::gridIndex(int i1, int i2, int i3) const {
  const int n = gridN;
  i1 = ((i1 % n) + n) % n;
  i2 = ((i2 % n) + n) % n;
  i3 = ((i3 % n) + n) % n;
  return i1 + n * (i2 + n * i3);
}

RadiusFn roundShape(double radius) {
  return [radius](const Vec3&) { return radius; };
}

RadiusFn ellipsoidShape(const Vec3& axes) {
  return [axes](const Vec3& d) { return 1.0 / std::sqrt(d.cwiseQuotient(axes).squaredNorm()); };
}

RadiusFn dentedShape() {
  return [](const Vec3& d) { return 1.0 - 0.5 * std::exp(-(d - Vec3::UnitZ()).squaredNorm() / 0.1); };
}

RadiusFn shapeByName(const std::string& name) {
  if (name == "round") return roundShape(1.0);
  if (name == "round2") return roundShape(2.0);
  if (name == "ellipsoid") return ellipsoidShape(Vec3(1.0, 1.0, 0.5));
  if (name == "dented") return dentedShape();
  throw Error(ErrorKind::ConfigError, "unknown ball shape '" + name + "'");
}

Domain buildTorusGrid(int n) {
  if (n < 4) throw Error(ErrorKind::InvalidResolution, "torus grid needs N >= 4, got " + std::to_string(n));
  Domain domain;
  domain.kind = DomainKind::PeriodicGrid;
  domain.label = "torus";
  domain.gridN = n;
  domain.spacing = 1.0 / n;
  domain.nodes.resize(static_cast<std::size_t>(n) * n * n);
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        Vec7 x = Vec7::Zero();
        x(0) = i1 * domain.spacing;
        x(1) = i2 * domain.spacing;
        x(2) = i3 * domain.spacing;
        domain.nodes[domain.gridIndex(i1, i2, i3)] = x;
      }
  setFlatFrames(domain);
  return domain;
}

Domain buildBallMesh(const RadiusFn& radius, int refinement, const std::string& shapeName) {
  if (refinement < 0) throw Error(ErrorKind::InvalidResolution, "refinement must be >= 0");
  const Icosahedron ico = makeIcosahedron();

  std::vector<Vec3> points = ico.vertices;
  const int centre = static_cast<int>(points.size());
  points.push_back(Vec3::Zero());

  std::vector<std::array<int, 4>> tets;
  for (const auto& f : ico.faces) tets.push_back({centre, f[0], f[1], f[2]});
  std::vector<std::array<int, 3>> tris = ico.faces;

  for (int level = 0; level < refinement; ++level) {
    MidpointCache mid(points);
    std::vector<std::array<int, 4>> fine;
    fine.reserve(tets.size() * 8);
    for (const auto& t : tets) {
      const int x0 = t[0], x1 = t[1], x2 = t[2], x3 = t[3];
      const int x01 = mid(x0, x1), x02 = mid(x0, x2), x03 = mid(x0, x3);
      const int x12 = mid(x1, x2), x13 = mid(x1, x3), x23 = mid(x2, x3);
      fine.push_back({x0, x01, x02, x03});
      fine.push_back({x01, x1, x12, x13});
      fine.push_back({x02, x12, x2, x23});
      fine.push_back({x03, x13, x23, x3});
      fine.push_back({x01, x02, x03, x13});
      fine.push_back({x01, x02, x12, x13});
      fine.push_back({x02, x03, x13, x23});
      fine.push_back({x02, x12, x13, x23});
    }
    std::vector<std::array<int, 3>> fineTris;
    fineTris.reserve(tris.size() * 4);
    for (const auto& f : tris) {
      const int a = f[0], b = f[1], c = f[2];
      const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      fineTris.push_back({a, ab, ca});
      fineTris.push_back({ab, b, bc});
      fineTris.push_back({ca, bc, c});
      fineTris.push_back({ab, bc, ca});
    }
    tets = std::move(fine);
    tris = std::move(fineTris);
  }

  // Radial map of the polyhedral ball onto {r <= radius(direction)}.
  std::vector<char> onBoundary(points.size(), 0);
  for (const auto& f : tris)
    for (int a : f) onBoundary[a] = 1;
  std::vector<Vec3> faceNormal;
  std::vector<double> faceOffset;
  for (const auto& f : ico.faces) {
    const Vec3 n = (ico.vertices[f[1]] - ico.vertices[f[0]]).cross(ico.vertices[f[2]] - ico.vertices[f[0]]).normalized();
    faceNormal.push_back(n);
    faceOffset.push_back(n.dot(ico.vertices[f[0]]));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = points[i].norm();
    if (r == 0.0) continue;
    const Vec3 dir = points[i] / r;
    double rho = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < faceNormal.size(); ++f) {
      const double c = faceNormal[f].dot(dir);
      if (c > 0) rho = std::min(rho, faceOffset[f] / c);
    }
    const double target = radius(dir);
    if (!(target > 0)) throw Error(ErrorKind::MeshQualityError, "radius function must be positive");
    points[i] = (onBoundary[i] ? 1.0 : r / rho) * target * dir;
  }

  Domain domain;
  domain.kind = DomainKind::BallMesh;
  domain.label = "ball";
  domain.refinement = refinement;
  domain.shape = shapeName;
  domain.nodes.reserve(points.size());
  for (const Vec3& p : points) domain.nodes.push_back(lift(p));

  // Orient every tetrahedron positively.
  for (auto& t : tets) {
    if (signedVolume(points[t[0]], points[t[1]], points[t[2]], points[t[3]]) < 0) std::swap(t[2], t[3]);
  }
  domain.cells = std::move(tets);
  finalizeTetDomain(domain, tris);
  return domain;
}

void finalizeTetDomain(Domain& domain, const std::vector<std::array<int, 3>>& boundaryTriangles) {
  if (!domain.cells.empty()) {
    const auto vols = tetVolumes(domain);
    const double mean = std::accumulate(vols.begin(), vols.end(), 0.0) / static_cast<double>(vols.size());
    for (std::size_t t = 0; t < vols.size(); ++t) {
      if (!(vols[t] >= 1e-12 * std::abs(mean))) {
        throw Error(ErrorKind::MeshQualityError,
                    "tetrahedron " + std::to_string(t) + " has volume " + std::to_string(vols[t]) +
                        " (mean " + std::to_string(mean) + ")");
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
  }
  if (!domain.hasFrames()) setFlatFrames(domain);

  if (boundaryTriangles.empty()) {
    domain.boundary.reset();
    return;
  }
  SurfaceMesh surface;
  std::map<int, int> local;
  for (const auto& f : boundaryTriangles) {
    std::array<int, 3> lt{};
    for (int a = 0; a < 3; ++a) {
      auto [it, inserted] = local.emplace(f[a], static_cast<int>(local.size()));
      (void)inserted;
      lt[a] = it->second;
    }
    surface.triangles.push_back(lt);
  }
  surface.points.resize(local.size());
  surface.volumeNode.resize(local.size());
  for (const auto& [global, idx] : local) {
    surface.points[idx] = domain.nodes[global].head<3>();
    surface.volumeNode[idx] = global;
  }
  computeBoundaryFrames(surface);
  domain.boundary = std::move(surface);
}

std::vector<double> tetVolumes(const Domain& domain) {
  std::vector<double> vols(domain.cells.size());
  for (std::size_t t = 0; t < domain.cells.size(); ++t) {
    const auto& c = domain.cells[t];
    Eigen::Matrix<double, 7, 3> edges;
    for (int a = 0; a < 3; ++a) edges.col(a) = domain.nodes[c[a + 1]] - domain.nodes[c[0]];
    if (edges.bottomRows<4>().isZero(0.0)) {
      // Cells of R^3 x {0} keep their orientation sign.
      vols[t] = Eigen::Matrix3d(edges.topRows<3>()).determinant() / 6.0;
    } else {
      vols[t] = std::sqrt(std::max(0.0, (edges.transpose() * edges).determinant())) / 6.0;
    }
  }
  return vols;
}

Eigen::VectorXd nodalWeights(const Domain& domain) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(domain.nodeCount());
  if (domain.kind == DomainKind::PeriodicGrid) {
    w.setConstant(std::pow(domain.spacing, 3));
    return w;
  }
  const auto vols = tetVolumes(domain);
  for (std::size_t t = 0; t < domain.cells.size(); ++t)
    for (int a : domain.cells[t]) w(a) += std::abs(vols[t]) / 4.0;
  return w;
}

std::vector<std::vector<int>> nodeNeighbors(const Domain& domain) {
  std::vector<std::set<int>> sets(domain.nodeCount());
  if (domain.kind == DomainKind::PeriodicGrid) {
    const int n = domain.gridN;
    for (int i3 = 0; i3 < n; ++i3)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < n; ++i1) {
          auto& s = sets[domain.gridIndex(i1, i2, i3)];
          for (int d : {-1, 1}) {
            s.insert(domain.gridIndex(i1 + d, i2, i3));
            s.insert(domain.gridIndex(i1, i2 + d, i3));
            s.insert(domain.gridIndex(i1, i2, i3 + d));
          }
        }
  } else {
    for (const auto& c : domain.cells)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (a != b) sets[c[a]].insert(c[b]);
  }
  std::vector<std::vector<int>> out(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) out[i].assign(sets[i].begin(), sets[i].end());
  return out;
}

FrameCheck checkFrames(const Domain& domain) {
  if (!domain.hasFrames()) throw Error(ErrorKind::MissingFrames, "domain has no frames");
  FrameCheck out;
  for (int i = 0; i < domain.nodeCount(); ++i) {
    const auto& t = domain.tangentFrame[i];
    const auto& n = domain.normalFrame[i];
    std::array<Vec7, 7> all{t[0], t[1], t[2], n[0], n[1], n[2], n[3]};
    for (int a = 0; a < 7; ++a)
      for (int b = 0; b < 7; ++b) {
        const double target = a == b ? 1.0 : 0.0;
        const double err = std::abs(all[a].dot(all[b]) - target);
        if (a < 3 && b < 3) out.orthonormality = std::max(out.orthonormality, err);
        else if (a >= 3 && b >= 3) out.orthonormality = std::max(out.orthonormality, err);
        else out.normalTangent = std::max(out.normalTangent, std::abs(all[a].dot(all[b])));
      }
    out.crossConsistency = std::max(out.crossConsistency, (t[2] - cross(t[0], t[1])).norm());
    const std::array<Vec7, 3> basis{t[0], t[1], t[2]};
    if (!classifyPlane(basis, PlaneKind::Associative3).flag) out.associative = false;
  }
  return out;
}

std::vector<std::vector<int>> vertexNeighbors(const SurfaceMesh& surface) {
  std::vector<std::set<int>> sets(surface.vertexCount());
  for (const auto& f : surface.triangles)
    for (int a = 0; a < 3; ++a) {
      sets[f[a]].insert(f[(a + 1) % 3]);
      sets[f[a]].insert(f[(a + 2) % 3]);
    }
  std::vector<std::vector<int>> out(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) out[i].assign(sets[i].begin(), sets[i].end());
  return out;
}

std::vector<int> ringNeighborhood(const std::vector<std::vector<int>>& adjacency, int centre, int rings) {
  std::vector<int> out;
  std::map<int, int> depth{{centre, 0}};
  std::queue<int> queue;
  queue.push(centre);
  while (!queue.empty()) {
    const int a = queue.front();
    queue.pop();
    if (depth[a] == rings) continue;
    for (int b : adjacency[a]) {
      if (depth.count(b)) continue;
      depth[b] = depth[a] + 1;
      out.push_back(b);
      queue.push(b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct HeightFit {
  double a = 0, b = 0, c = 0, d = 0, e = 0;
};

HeightFit fitHeight(const SurfaceMesh& s, int p, const std::vector<int>& nbrs, const Vec3& n, const Vec3& t1,
                    const Vec3& t2, double scale) {
  const int m = static_cast<int>(nbrs.size());
  // cubic terms keep the curvature estimate unbiased where curvature varies quickly
  const bool cubic = m >= 12;
  Eigen::MatrixXd A(m, cubic ? 9 : 5);
  Eigen::VectorXd z(m);
  for (int r = 0; r < m; ++r) {
    const Vec3 d = s.points[nbrs[r]] - s.points[p];
    const double u = d.dot(t1) / scale, v = d.dot(t2) / scale;
    const double wt = 1.0 / (d.squaredNorm() / (scale * scale));
    if (cubic)
      A.row(r) << u, v, 0.5 * u * u, u * v, 0.5 * v * v, u * u * u, u * u * v, u * v * v, v * v * v;
    else
      A.row(r) << u, v, 0.5 * u * u, u * v, 0.5 * v * v;
    A.row(r) *= wt;
    z(r) = wt * d.dot(n) / scale;
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(z);
  HeightFit fit;
  fit.a = x(0);
  fit.b = x(1);
  fit.c = x(2) / scale;
  fit.d = x(3) / scale;
  fit.e = x(4) / scale;
  return fit;
}

void tangentBasis(const Vec3& n, Vec3& t1, Vec3& t2) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(n(i)) < std::abs(n(k))) k = i;
  t1 = (Vec3::Unit(k) - n(k) * n).normalized();
  t2 = n.cross(t1);
}

} // namespace

void computeBoundaryFrames(SurfaceMesh& s) {
  const int nv = s.vertexCount();
  const auto adjacency = vertexNeighbors(s);

  double edgeSum = 0.0;
  int edgeCount = 0;
  for (int i = 0; i < nv; ++i)
    for (int j : adjacency[i])
      if (j > i) {
        edgeSum += (s.points[i] - s.points[j]).norm();
        ++edgeCount;
      }
  s.meanEdge = edgeCount ? edgeSum / edgeCount : 0.0;

  s.area.assign(nv, 0.0);
  s.areaNormal.assign(nv, Vec3::Zero());
  std::vector<Vec3> angleNormal(nv, Vec3::Zero());
  for (const auto& f : s.triangles) {
    const Vec3 cr = (s.points[f[1]] - s.points[f[0]]).cross(s.points[f[2]] - s.points[f[0]]);
    const double area = 0.5 * cr.norm();
    const Vec3 outward = cr.normalized();
    for (int a = 0; a < 3; ++a) {
      const Vec3 e1 = (s.points[f[(a + 1) % 3]] - s.points[f[a]]).normalized();
      const Vec3 e2 = (s.points[f[(a + 2) % 3]] - s.points[f[a]]).normalized();
      const double angle = std::acos(std::clamp(e1.dot(e2), -1.0, 1.0));
      angleNormal[f[a]] += angle * outward;
      s.area[f[a]] += area / 3.0;
      s.areaNormal[f[a]] -= (area / 3.0) * outward;
    }
  }

  s.normal.assign(nv, Vec3::Zero());
  s.v.assign(nv, Vec3::Zero());
  s.w.assign(nv, Vec3::Zero());
  s.kv.assign(nv, 0.0);
  s.kw.assign(nv, 0.0);
  s.meanCurvature.assign(nv, 0.0);

  for (int p = 0; p < nv; ++p) {
    Vec3 n = -angleNormal[p].normalized();
    const auto nbrs = ringNeighborhood(adjacency, p, 2);
    const double scale = s.meanEdge > 0 ? s.meanEdge : 1.0;
    Vec3 t1, t2;
    HeightFit fit;
    for (int pass = 0; pass < 3; ++pass) {
      tangentBasis(n, t1, t2);
      fit = fitHeight(s, p, nbrs, n, t1, t2, scale);
      if (pass < 2) n = (n - fit.a * t1 - fit.b * t2).normalized();
    }
    Eigen::Matrix2d first;
    first << 1 + fit.a * fit.a, fit.a * fit.b, fit.a * fit.b, 1 + fit.b * fit.b;
    Eigen::Matrix2d second;
    second << fit.c, fit.d, fit.d, fit.e;
    second /= std::sqrt(1 + fit.a * fit.a + fit.b * fit.b);
    Eigen::Matrix2d shape = first.inverse() * second;
    shape = 0.5 * (shape + shape.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(shape);
    const double kMin = eig.eigenvalues()(0), kMax = eig.eigenvalues()(1);
    Vec3 v;
    if (std::abs(kMax - kMin) <= 1e-9 * std::max(1.0, std::abs(kMax) + std::abs(kMin))) {
      v = Vec3::Zero();
      for (int axis = 0; axis < 3 && v.norm() < 1e-3; ++axis) v = Vec3::Unit(axis) - n(axis) * n;
      v.normalize();
    } else {
      const Eigen::Vector2d dir = eig.eigenvectors().col(1);
      v = (dir(0) * t1 + dir(1) * t2).normalized();
    }
    s.normal[p] = n;
    s.v[p] = v;
    s.w[p] = n.cross(v);
    s.kv[p] = kMax;
    s.kw[p] = kMin;
    s.meanCurvature[p] = 0.5 * (kMax + kMin);
  }
}

int eulerGenus(const SurfaceMesh& surface) {
  std::map<EdgeKey, int> edgeCount;
  std::set<int> used;
  for (const auto& f : surface.triangles)
    for (int a = 0; a < 3; ++a) {
      ++edgeCount[edgeKey(f[a], f[(a + 1) % 3])];
      used.insert(f[a]);
    }
  for (const auto& [e, c] : edgeCount) {
    if (c != 2) {
      throw Error(ErrorKind::NonClosedSurface, "edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                                                   ") has " + std::to_string(c) + " incident triangles");
    }
  }
  const long chi = static_cast<long>(used.size()) - static_cast<long>(edgeCount.size()) +
                   static_cast<long>(surface.triangles.size());
  if ((2 - chi) % 2 != 0) throw Error(ErrorKind::NonClosedSurface, "odd Euler characteristic");
  return static_cast<int>((2 - chi) / 2);
}

} // namespace g2cal
