#include "g2cal/boundary.hpp"
#include "g2cal/errors.hpp"
#include "g2cal/surface_fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace g2cal;

namespace {

const Vec7 kE = basisVector(3);

struct ChernTriple {
  int nu, mu, tangent;
};

ChernTriple chernAll(const SurfaceMesh& s, const Vec7& e) {
  const BoundaryBundles b = decomposeBoundaryBundles(s, e);
  return {chernNumber(s, b.nu).c1, chernNumber(s, b.mu).c1, chernNumber(s, b.tangent).c1};
}

} // namespace

TEST(BoundaryBundles, ComplexStructureAndSplitting) {
  const Domain d = buildBallMesh(roundShape(1.0), 1, "round");
  const BoundaryBundles b = decomposeBoundaryBundles(d, kE);
  EXPECT_LT(b.maxInvarianceError, 1e-12);
  EXPECT_LT(b.maxOrthogonalityError, 1e-12);
  for (std::size_t i = 0; i < b.nu.size(); ++i) {
    EXPECT_NEAR(b.nu[i][0].dot(kE), 1.0, 1e-12); // e itself spans nu_X
    for (const auto& f : b.mu[i]) EXPECT_NEAR(f.dot(kE), 0.0, 1e-12);
  }
}

TEST(BoundaryBundles, RejectsTangentialE) {
  const Domain d = buildBallMesh(roundShape(1.0), 0, "round");
  try {
    decomposeBoundaryBundles(d, basisVector(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidNormal);
  }
  EXPECT_THROW(decomposeBoundaryBundles(d, 2.0 * kE), Error);
}

TEST(Chern, SphereBoundary) {
  const Domain d = buildBallMesh(roundShape(1.0), 2, "round");
  const ChernTriple c = chernAll(*d.boundary, kE);
  EXPECT_EQ(c.nu, 0);
  EXPECT_EQ(c.mu, -2);
  EXPECT_EQ(c.tangent, 2);
}

TEST(Chern, TangentBundleIsEulerCharacteristic) {
  // Gauss-Bonnet: c1(T) = 2 - 2g, and the three bundles sum to zero
  const struct {
    SurfaceMesh s;
    int genus;
  } cases[] = {{torusOfRevolution(2.0, 0.7, 96, 48), 1}, {genusTwoSurface(), 2}};
  for (auto cs : cases) {
    if (!cs.s.hasFrames()) computeBoundaryFrames(cs.s);
    for (int k = 3; k < 7; ++k) {
      const ChernTriple c = chernAll(cs.s, basisVector(k));
      EXPECT_EQ(c.tangent, 2 - 2 * cs.genus);
      EXPECT_EQ(c.nu + c.mu + c.tangent, 0);
    }
  }
}

TEST(Chern, RelationUnderRotatedE) {
  const Domain d = buildBallMesh(ellipsoidShape(Vec3(1, 1, 0.5)), 2, "ellipsoid");
  Vec7 e = Vec7::Zero();
  e.tail<4>() << 0.3, -0.5, 0.7, 0.4;
  e.normalize();
  const ChernTriple c = chernAll(*d.boundary, e);
  EXPECT_EQ(c.nu + c.mu + c.tangent, 0);
  EXPECT_EQ(c.tangent, 2);
}

TEST(IndexFormula, BallAndTorus) {
  const Domain d = buildBallMesh(roundShape(1.0), 2, "round");
  const IndexResult r = indexFormula(*d.boundary, decomposeBoundaryBundles(d, kE));
  EXPECT_EQ(r.genus, 0);
  EXPECT_EQ(r.index, 1);
  const SurfaceMesh t = torusOfRevolution(2.0, 0.7, 96, 48);
  const IndexResult rt = indexFormula(t, decomposeBoundaryBundles(t, kE));
  EXPECT_EQ(rt.genus, 1);
  EXPECT_EQ(rt.index, rt.chern.c1);
}

TEST(BoundaryOperator, RoundSphereEigenvalues) {
  // on a sphere of radius r, D_mu = (1/r) Id and D_nu = diag(0, 2/r)
  for (const auto& [shape, r] : {std::pair{"round", 1.0}, std::pair{"round2", 2.0}}) {
    const Domain d = buildBallMesh(shapeByName(shape), 3, shape);
    const SurfaceMesh& s = *d.boundary;
    const BoundaryBundles b = decomposeBoundaryBundles(d, kE);
    const DLField mu = assembleDL(s, b, BundleKind::MuX);
    const DLField nu = assembleDL(s, b, BundleKind::NuX);
    double muErr = 0.0, nuErr = 0.0;
    for (std::size_t i = 0; i < mu.eigenvalues.size(); ++i) {
      muErr = std::max(muErr, (mu.eigenvalues[i] * r - Eigen::Vector2d::Ones()).cwiseAbs().maxCoeff());
      nuErr = std::max(nuErr, std::abs(nu.matrix[i](0, 0)) + std::abs(nu.matrix[i](0, 1)));
    }
    EXPECT_LT(muErr, 0.05) << shape;
    EXPECT_LT(nuErr, s.meanEdge * s.meanEdge) << shape;
  }
}

TEST(BoundaryOperator, TraceIsTwiceMeanCurvature) {
  // ellipsoid x^2 + y^2 + z^2/c^2 = 1 with g = (x, y, z/c^2): 2H = |(|p|^2 - 2 - c^2)| / (c^2 |g|^3)
  const double c = 0.5;
  std::vector<double> errors;
  for (int r : {2, 3}) {
    const Domain d = buildBallMesh(ellipsoidShape(Vec3(1, 1, c)), r, "ellipsoid");
    const SurfaceMesh& s = *d.boundary;
    const BoundaryBundles b = decomposeBoundaryBundles(d, kE);
    double worst = 0.0;
    for (BundleKind k : {BundleKind::MuX, BundleKind::NuX}) {
      const DLField f = assembleDL(s, b, k);
      for (int i = 0; i < s.vertexCount(); ++i) {
        const Vec3& p = s.points[i];
        const double g = Vec3(p.x(), p.y(), p.z() / (c * c)).norm();
        const double twoH = std::abs(p.squaredNorm() - 2 - c * c) / (c * c * g * g * g);
        worst = std::max(worst, std::abs(f.trace[i] - twoH));
      }
    }
    errors.push_back(worst);
  }
  EXPECT_LT(errors[1], errors[0] / 3.0); // second order
  EXPECT_LT(errors[1], 0.4);
}

TEST(BoundaryOperator, FrameIndependent) {
  const Domain d = buildBallMesh(dentedShape(), 2, "dented");
  const SurfaceMesh& s = *d.boundary;
  const BoundaryBundles b = decomposeBoundaryBundles(d, kE);
  const DLField a = assembleDL(s, b, BundleKind::MuX, 0.0);
  const DLField c = assembleDL(s, b, BundleKind::MuX, 1.1);
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
    EXPECT_LT((a.eigenvalues[i] - c.eigenvalues[i]).norm(), 1e-8);
}

TEST(BoundaryOperator, MissingCurvature) {
  const Domain d = buildBallMesh(roundShape(1.0), 0, "round");
  SurfaceMesh s = *d.boundary;
  const BoundaryBundles b = decomposeBoundaryBundles(s, kE);
  s.kv.clear();
  try {
    assembleDL(s, b, BundleKind::MuX);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingCurvatureData);
  }
}

TEST(BoundaryProblem, KernelsAndVerdictOnRoundBall) {
  const Domain d = buildBallMesh(roundShape(1.0), 2, "round");
  const AssembledOperator op = assembleD(d);
  const BoundaryBundles b = decomposeBoundaryBundles(d, kE);
  const BoundaryCondition nu = makeBoundaryCondition(d, b, BundleKind::NuX);
  const BoundaryCondition mu = makeBoundaryCondition(d, b, BundleKind::MuX);
  const KernelEstimate kn = kernelDim(op, &nu);
  const KernelEstimate km = kernelDim(op, &mu);
  EXPECT_EQ(kn.dim, 1);
  EXPECT_EQ(km.dim, 0);
  EXPECT_GT(kn.gap, 50);
  EXPECT_GT(km.gap, 50);
  // the nu_X kernel is the constant section e
  const NormalField psi = kernelVectorToField(op, &nu, kn.basis.col(0));
  Eigen::Vector4d avg = Eigen::Vector4d::Zero();
  for (int i = 0; i < d.nodeCount(); ++i) avg += psi.segment<4>(4 * i);
  avg /= d.nodeCount();
  for (int i = 0; i < d.nodeCount(); ++i) EXPECT_LT((psi.segment<4>(4 * i) - avg).norm(), 1e-8);
  EXPECT_NEAR(std::abs(avg.normalized()[0]), 1.0, 1e-8);

  const SimonsField simons = simonsOperators(d, secondFundamentalForm(d));
  const IndexResult idx = indexFormula(*d.boundary, b);
  const RigidityReport rr = rigidityReport(assembleDL(*d.boundary, b, BundleKind::MuX), simons, idx.index);
  EXPECT_EQ(rr.verdict, Verdict::SmoothModuli);
  EXPECT_EQ(rr.expectedDimension, 1);
  EXPECT_EQ(idx.index, kn.dim - km.dim);
}

TEST(BoundaryProblem, DentedBallIsInconclusive) {
  const Domain d = buildBallMesh(dentedShape(), 2, "dented");
  const BoundaryBundles b = decomposeBoundaryBundles(d, kE);
  const SimonsField simons = simonsOperators(d, secondFundamentalForm(d));
  const RigidityReport rr =
      rigidityReport(assembleDL(*d.boundary, b, BundleKind::MuX), simons, indexFormula(*d.boundary, b).index);
  EXPECT_EQ(rr.verdict, Verdict::Inconclusive);
  EXPECT_LT(rr.minDLMu, 0.0);
}

TEST(BoundaryBochner, LinearFamilyResidualDecreases) {
  double prev = 1e300;
  const Eigen::MatrixXd G = linearHarmonicCoefficients();
  for (int r : {1, 2}) {
    const Domain d = buildBallMesh(roundShape(1.0), r, "round");
    const AssembledOperator op = assembleD(d);
    const SimonsField simons = simonsOperators(d, secondFundamentalForm(d));
    double worst = 0.0;
    for (Eigen::Index j = 0; j < G.cols(); ++j)
      worst = std::max(worst, boundaryBochner(op, &simons, linearField(d, G.col(j))).relative());
    EXPECT_LT(worst, prev);
    prev = worst;
  }
}
