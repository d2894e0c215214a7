#include "g2cal/geometry.hpp"
#include "g2cal/surface_fixtures.hpp"

#include <Eigen/Geometry>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace g2cal;

namespace {

int nearestVertex(const SurfaceMesh& s, const Vec3& p) {
  int best = 0;
  for (int i = 1; i < s.vertexCount(); ++i)
    if ((s.points[i] - p).norm() < (s.points[best] - p).norm()) best = i;
  return best;
}

std::pair<double, double> sortedCurvatures(const SurfaceMesh& s, int i) {
  return {std::min(s.kv[i], s.kw[i]), std::max(s.kv[i], s.kw[i])};
}

} // namespace

TEST(SecondFundamentalForm, FlatBallIsTotallyGeodesic) {
  const Domain d = buildBallMesh(roundShape(1.0), 1, "round");
  const ShapeField A = secondFundamentalForm(d);
  for (const auto& node : A.A)
    for (const auto& m : node) EXPECT_EQ(m.norm(), 0.0);
  const SimonsField S = simonsOperators(d, A);
  EXPECT_TRUE(S.flat);
  EXPECT_EQ(S.globalMinNormalEigenvalue(), 0.0);
}

TEST(SecondFundamentalForm, RoundThreeSphere) {
  // S^3 of radius r in R^4: A_{x/r} = -Id / r up to sign, other normals totally geodesic,
  // so the Simons matrix (tr A_k A_l) is diag(3/r^2, 0, 0, 0).
  const double r = 1.5;
  const Domain d = buildSphere3(r, 6, 0.5);
  const NodalGradient grad(d);
  const ShapeField A = secondFundamentalForm(d, grad);
  const SimonsField S = simonsOperators(d, A);
  double worst = 0.0;
  for (std::size_t i = 0; i < S.shape.size(); ++i) {
    Mat4 expected = Mat4::Zero();
    expected(0, 0) = 3.0 / (r * r);
    worst = std::max(worst, (S.shape[i] - expected).norm());
  }
  EXPECT_LT(worst, 0.2);
  const auto H = meanCurvatureVector(d, grad);
  double hWorst = 0.0;
  for (const auto& h : H) hWorst = std::max(hWorst, (h - Eigen::Vector4d(-3.0 / r, 0, 0, 0)).norm());
  EXPECT_LT(hWorst, 0.2);
}

TEST(SecondFundamentalForm, RicciResidualDecreases) {
  double prev = 1e300;
  for (int m : {3, 5}) {
    const Domain d = buildSphere3(1.0, m, 0.5);
    const NodalGradient grad(d);
    const RicciCheck rc = ricciEquationResidual(d, grad, secondFundamentalForm(d, grad));
    EXPECT_GT(rc.connectionScale, 0.1); // the twisted frame has a non-trivial connection
    EXPECT_LT(rc.maxResidual, prev);
    prev = rc.maxResidual;
  }
}

TEST(BoundaryCurvature, EllipsoidClosedForm) {
  // x^2 + y^2 + z^2/c^2 = 1, g = (x, y, z/c^2): K = 1 / (c^2 |g|^4), H = |(|p|^2 - 2 - c^2)| / (2 c^2 |g|^3)
  const double c = 0.5;
  std::vector<double> errors;
  for (int r : {2, 3}) {
    const Domain d = buildBallMesh(ellipsoidShape(Vec3(1, 1, c)), r, "ellipsoid");
    const SurfaceMesh& s = *d.boundary;
    double worst = 0.0;
    for (int i = 0; i < s.vertexCount(); ++i) {
      const Vec3& p = s.points[i];
      const double g = Vec3(p.x(), p.y(), p.z() / (c * c)).norm();
      const double K = 1.0 / (c * c * std::pow(g, 4));
      const double H = std::abs(p.squaredNorm() - 2 - c * c) / (2 * c * c * std::pow(g, 3));
      const double disc = std::sqrt(std::max(0.0, H * H - K));
      const auto k = sortedCurvatures(s, i);
      worst = std::max({worst, std::abs(k.first - (H - disc)), std::abs(k.second - (H + disc))});
    }
    errors.push_back(worst);
  }
  EXPECT_LT(errors[1], errors[0] / 2.0);
  EXPECT_LT(errors[1], 0.15 / (c * c)); // 15% of the largest curvature
  // equator {1, 1/c^2} and pole {c, c}
  const Domain d = buildBallMesh(ellipsoidShape(Vec3(1, 1, c)), 3, "ellipsoid");
  const SurfaceMesh& s = *d.boundary;
  const auto pole = sortedCurvatures(s, nearestVertex(s, Vec3(0, 0, c)));
  EXPECT_NEAR(pole.first, c, 0.03);
  EXPECT_NEAR(pole.second, c, 0.03);
  const auto eq = sortedCurvatures(s, nearestVertex(s, Vec3(1, 0, 0)));
  EXPECT_NEAR(eq.first, 1.0, 0.05);
  EXPECT_NEAR(eq.second, 1.0 / (c * c), 0.1 / (c * c));
}

TEST(BoundaryCurvature, GaussBonnetOnEllipsoid) {
  std::vector<double> errors;
  for (int r : {3, 4}) {
    const Domain d = buildBallMesh(ellipsoidShape(Vec3(1, 1, 0.5)), r, "ellipsoid");
    const SurfaceMesh& s = *d.boundary;
    double total = 0.0;
    for (int i = 0; i < s.vertexCount(); ++i) total += s.kv[i] * s.kw[i] * s.area[i];
    errors.push_back(std::abs(total / (4.0 * std::numbers::pi) - 1.0));
  }
  EXPECT_LT(errors[1], errors[0] / 2.0);
  EXPECT_LT(errors[1], 0.03);
}

TEST(BoundaryCurvature, TorusOfRevolution) {
  // tube curvature 1/r; the other is cos(t) / (R + r cos(t)) for the angle t from the outer equator
  const double R = 2.0, r = 0.7;
  const SurfaceMesh s = torusOfRevolution(R, r, 96, 48);
  double worst = 0.0;
  for (int i = 0; i < s.vertexCount(); ++i) {
    const Vec3& p = s.points[i];
    const double rho = std::hypot(p.x(), p.y());
    const double cosT = (rho - R) / r;
    const double k2 = cosT / (R + r * cosT);
    const double lo = std::min(1.0 / r, k2), hi = std::max(1.0 / r, k2);
    const auto k = sortedCurvatures(s, i);
    worst = std::max({worst, std::abs(k.first - lo), std::abs(k.second - hi)});
  }
  EXPECT_LT(worst, 0.02);
}

TEST(BoundaryCurvature, FramesAreOrthonormal) {
  const Domain d = buildBallMesh(dentedShape(), 2, "dented");
  const SurfaceMesh& s = *d.boundary;
  for (int i = 0; i < s.vertexCount(); ++i) {
    EXPECT_NEAR(s.normal[i].norm(), 1.0, 1e-12);
    EXPECT_NEAR(s.v[i].dot(s.normal[i]), 0.0, 1e-12);
    EXPECT_LT((s.w[i] - s.normal[i].cross(s.v[i])).norm(), 1e-12);
  }
}
