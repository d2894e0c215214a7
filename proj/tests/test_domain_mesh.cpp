#include "g2cal/errors.hpp"
#include "g2cal/mesh.hpp"
#include "g2cal/mesh_io.hpp"
#include "g2cal/surface_fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace g2cal;

namespace {

ErrorKind kindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::runtime_error("no g2cal::Error thrown");
}

} // namespace

TEST(TorusGrid, SizesAndFrames) {
  const Domain d = buildTorusGrid(6);
  EXPECT_EQ(d.nodeCount(), 216);
  EXPECT_DOUBLE_EQ(d.spacing, 1.0 / 6);
  EXPECT_EQ(d.gridIndex(6, -1, 13), d.gridIndex(0, 5, 1));
  const FrameCheck fc = checkFrames(d);
  EXPECT_EQ(fc.orthonormality, 0.0);
  EXPECT_EQ(fc.crossConsistency, 0.0);
  EXPECT_TRUE(fc.associative);
  EXPECT_NEAR(nodalWeights(d).sum(), 1.0, 1e-14);
}

TEST(TorusGrid, RejectsCoarseResolution) {
  EXPECT_EQ(kindOf([] { buildTorusGrid(3); }), ErrorKind::InvalidResolution);
}

TEST(BallMesh, VolumeConvergesToUnitBall) {
  const double exact = 4.0 / 3.0 * std::numbers::pi;
  // inscribed polyhedron: the volume deficit is second order in the edge length
  std::vector<double> errors;
  for (int r = 0; r <= 3; ++r) {
    const Domain d = buildBallMesh(roundShape(1.0), r, "round");
    for (double v : tetVolumes(d)) ASSERT_GT(v, 0.0);
    errors.push_back(std::abs(nodalWeights(d).sum() - exact) / exact);
  }
  for (std::size_t r = 1; r < errors.size(); ++r) EXPECT_GT(errors[r - 1] / errors[r], 3.0) << r;
  EXPECT_LT(errors.back(), 0.01);
}

TEST(BallMesh, BoundaryIsGenusZeroSphere) {
  const Domain d = buildBallMesh(roundShape(1.0), 2, "round");
  ASSERT_TRUE(d.boundary);
  const SurfaceMesh& s = *d.boundary;
  EXPECT_EQ(eulerGenus(s), 0);
  // icosahedral sphere: 10 * 4^r + 2 vertices
  EXPECT_EQ(s.vertexCount(), 162);
  for (int i = 0; i < s.vertexCount(); ++i) {
    EXPECT_NEAR(s.points[i].norm(), 1.0, 1e-12);
    EXPECT_GT(s.normal[i].dot(-s.points[i]), 0.99); // inner normal
  }
}

TEST(BallMesh, RadialShapes) {
  const Vec3 axes(1.0, 1.0, 0.5);
  const RadiusFn r = ellipsoidShape(axes);
  for (const Vec3& u : {Vec3(1, 0, 0), Vec3(0, 0, 1), Vec3(1, 1, 1).normalized()}) {
    const Vec3 p = r(u) * u;
    EXPECT_NEAR(std::pow(p.x() / axes.x(), 2) + std::pow(p.y() / axes.y(), 2) + std::pow(p.z() / axes.z(), 2),
                1.0, 1e-12);
  }
  EXPECT_EQ(kindOf([] { shapeByName("cube"); }), ErrorKind::ConfigError);
}

TEST(Surfaces, GenusOfFixtures) {
  EXPECT_EQ(eulerGenus(torusOfRevolution(2.0, 0.7, 24, 12)), 1);
  EXPECT_EQ(eulerGenus(genusTwoSurface()), 2);
  EXPECT_EQ(eulerGenus(voxelSurface({{0, 0, 0}})), 0);
}

TEST(Surfaces, OpenSurfaceIsRejected) {
  SurfaceMesh s = voxelSurface({{0, 0, 0}});
  s.triangles.pop_back();
  EXPECT_EQ(kindOf([&] { eulerGenus(s); }), ErrorKind::NonClosedSurface);
}

TEST(MeshJson, RoundTripBall) {
  const Domain d = buildBallMesh(roundShape(1.0), 1, "round");
  const Domain back = domainFromJson(domainToJson(d));
  ASSERT_EQ(back.nodeCount(), d.nodeCount());
  ASSERT_EQ(back.cells.size(), d.cells.size());
  for (int i = 0; i < d.nodeCount(); ++i) EXPECT_EQ(back.nodes[i], d.nodes[i]);
  EXPECT_EQ(back.cells, d.cells);
  ASSERT_TRUE(back.boundary);
  EXPECT_EQ(back.boundary->triangles.size(), d.boundary->triangles.size());
  EXPECT_EQ(domainToJson(back).dump(), domainToJson(d).dump());
}

TEST(MeshJson, RoundTripTorusThroughFile) {
  const Domain d = buildTorusGrid(5);
  const auto path = (std::filesystem::temp_directory_path() / "g2cal_mesh_roundtrip.json").string();
  writeDomain(d, path);
  const Domain back = readDomain(path);
  EXPECT_EQ(back.kind, DomainKind::PeriodicGrid);
  EXPECT_EQ(back.gridN, 5);
  EXPECT_EQ(back.nodeCount(), 125);
  std::filesystem::remove(path);
}

TEST(MeshJson, Errors) {
  EXPECT_EQ(kindOf([] { readDomain("/nonexistent/dir/mesh.json"); }), ErrorKind::IoError);
  EXPECT_EQ(kindOf([] { domainFromJson(nlohmann::json{{"kind", "cube"}}); }), ErrorKind::ConfigError);
  nlohmann::json j = domainToJson(buildBallMesh(roundShape(1.0), 0, "round"), false);
  j["cells"][0][0] = 100000;
  EXPECT_EQ(kindOf([&] { domainFromJson(j); }), ErrorKind::ConfigError);
}
