#include "g2cal/cy_hodge.hpp"
#include "g2cal/errors.hpp"
#include "g2cal/surface_fixtures.hpp"

#include <Eigen/Eigenvalues>

#include <gtest/gtest.h>

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

double maxAbs(const SparseMatrix& m) {
  double x = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) x = std::max(x, std::abs(it.value()));
  return x;
}

struct Fixture {
  const char* name;
  DECComplex dec;
  std::array<int, 4> betti;
  int euler;
};

std::vector<Fixture> fixtures() {
  return {{"t3", buildCubicalTorus(4), {1, 3, 3, 1}, 0},
          {"s3", buildCubicalSphere3(2), {1, 0, 0, 1}, 0},
          {"s1xs2", buildCubicalS1xS2(2, 3), {1, 1, 1, 1}, 0},
          {"simplex", buildSimplicialDec(buildSimplexBoundary()), {1, 0, 0, 1}, 0}};
}

} // namespace

TEST(DEC, CellCountsOfCubicalTorus) {
  const DECComplex dec = buildCubicalTorus(3);
  EXPECT_EQ(dec.cellCount, (std::array<int, 4>{27, 81, 81, 27}));
  // the stars of a unit-volume grid with spacing 1/3
  EXPECT_NEAR(dec.star[0].sum(), 1.0, 1e-12);
  EXPECT_NEAR(dec.star[3].cwiseInverse().sum(), 1.0, 1e-12);
}

TEST(DEC, CoboundarySquaresToZero) {
  for (const Fixture& f : fixtures()) {
    EXPECT_EQ(maxAbs(f.dec.d1 * f.dec.d0), 0.0) << f.name;
    EXPECT_EQ(maxAbs(f.dec.d2 * f.dec.d1), 0.0) << f.name;
    const auto& c = f.dec.cellCount;
    EXPECT_EQ(c[0] - c[1] + c[2] - c[3], f.euler) << f.name;
  }
}

TEST(DEC, BettiNumbers) {
  for (const Fixture& f : fixtures()) EXPECT_EQ(betti(f.dec).b, f.betti) << f.name;
}

TEST(DEC, DveeSquareIsHodgeLaplacian) {
  for (const Fixture& f : fixtures()) {
    const DveeCheck c = dveeSquareCheck(f.dec, 10, 7);
    EXPECT_LT(c.squareResidual, 1e-10) << f.name;
    EXPECT_LT(c.tauBlockResidual, 1e-10) << f.name;
    EXPECT_LT(c.pairingResidual, 1e-10) << f.name;
    EXPECT_GT(c.minStar, 0.0) << f.name;
  }
}

TEST(DEC, LaplacianIsSymmetricPositiveInStarMetric) {
  const DECComplex dec = buildCubicalS1xS2(2, 4);
  const SparseMatrix L = assembleHodgeLaplacian(dec);
  Eigen::VectorXd w = dveeInputWeights(dec);
  const Eigen::MatrixXd M = w.asDiagonal() * Eigen::MatrixXd(L);
  EXPECT_LT((M - M.transpose()).norm(), 1e-10 * M.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (M + M.transpose()));
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-10);
}

TEST(DEC, KernelDimensionIsB1PlusOne) {
  for (const Fixture& f : fixtures()) {
    const CYKernel k = cyKernelDim(f.dec);
    EXPECT_EQ(k.estimate.dim, f.betti[1] + 1) << f.name;
    EXPECT_GT(k.estimate.gap, 50) << f.name;
    EXPECT_LT(k.decompositionResidual, 1e-8) << f.name;
  }
}

TEST(DEC, Errors) {
  EXPECT_EQ(kindOf([] { buildCubicalTorus(2); }), ErrorKind::InvalidResolution);
  EXPECT_EQ(kindOf([] { buildCubicalS1xS2(2, 2); }), ErrorKind::InvalidResolution);
  // a ball has boundary faces with a single coface
  EXPECT_EQ(kindOf([] { buildDec(buildBallMesh(roundShape(1.0), 0, "round")); }), ErrorKind::NonClosedComplex);
}
