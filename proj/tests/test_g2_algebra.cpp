#include "g2cal/errors.hpp"
#include "g2cal/g2_algebra.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace g2cal;

namespace {

// Oracle: the cross product read directly off the seven signed triples of phi.
Vec7 tripleCross(const Vec7& u, const Vec7& v) {
  struct T { int i, j, k; double s; };
  const T triples[] = {{0, 1, 2, 1}, {0, 3, 4, 1}, {0, 5, 6, 1}, {1, 3, 5, 1},
                       {1, 4, 6, -1}, {2, 3, 6, -1}, {2, 4, 5, -1}};
  Vec7 out = Vec7::Zero();
  for (const T& t : triples) {
    // e_i x e_j = s e_k and cyclic
    const int idx[3] = {t.i, t.j, t.k};
    for (int r = 0; r < 3; ++r) {
      const int a = idx[r], b = idx[(r + 1) % 3], c = idx[(r + 2) % 3];
      out[c] += t.s * (u[a] * v[b] - u[b] * v[a]);
    }
  }
  return out;
}

Vec7 randomVec(std::mt19937& rng) {
  std::normal_distribution<double> g;
  Vec7 x;
  for (int i = 0; i < 7; ++i) x[i] = g(rng);
  return x;
}

} // namespace

TEST(CalibrationAlgebra, CrossMatchesTripleTable) {
  std::mt19937 rng(1);
  for (int t = 0; t < 500; ++t) {
    const Vec7 u = randomVec(rng), v = randomVec(rng);
    EXPECT_LT((cross(u, v) - tripleCross(u, v)).norm(), 1e-13);
  }
}

TEST(CalibrationAlgebra, PhiValuesOnBasis) {
  const auto& alg = CalibrationAlgebra::standard();
  EXPECT_EQ(alg.phi(0, 1, 2), 1.0);
  EXPECT_EQ(alg.phi(1, 0, 2), -1.0);
  EXPECT_EQ(alg.phi(1, 4, 6), -1.0);
  EXPECT_EQ(alg.phi(2, 3, 6), -1.0);
  EXPECT_EQ(alg.phi(0, 1, 3), 0.0);
  int nonzero = 0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      for (int k = 0; k < 7; ++k) nonzero += alg.phi(i, j, k) != 0.0;
  EXPECT_EQ(nonzero, 42);
}

TEST(CalibrationAlgebra, StarPhiIsHodgeDualOfPhi) {
  // *phi(e_a, e_b, e_c, e_d) = eps(a..g) phi(e_e, e_f, e_g) over the complement, with
  // the complement ordered so that (a,b,c,d,e,f,g) is even.
  const auto& alg = CalibrationAlgebra::standard();
  auto parity = [](std::array<int, 7> p) {
    int s = 1;
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j)
        if (p[i] > p[j]) s = -s;
    return s;
  };
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b)
      for (int c = b + 1; c < 7; ++c)
        for (int d = c + 1; d < 7; ++d) {
          std::array<int, 7> p{a, b, c, d, 0, 0, 0};
          int q = 4;
          for (int x = 0; x < 7; ++x)
            if (x != a && x != b && x != c && x != d) p[q++] = x;
          const double expected = parity(p) * alg.phi(p[4], p[5], p[6]);
          EXPECT_EQ(alg.starPhi(a, b, c, d), expected) << a << b << c << d;
        }
}

TEST(CalibrationAlgebra, RandomIdentities) {
  std::mt19937 rng(7);
  for (int t = 0; t < 2000; ++t) {
    const Vec7 u = randomVec(rng), v = randomVec(rng), w = randomVec(rng);
    const double scale = u.norm() * v.norm() * w.norm();
    EXPECT_NEAR(cross(u, v).dot(w), CalibrationAlgebra::standard().phi(u, v, w), 1e-12 * scale);
    const Vec7 x = chi(u, v, w);
    EXPECT_LT(std::abs(x.dot(u)) + std::abs(x.dot(v)) + std::abs(x.dot(w)), 1e-12 * scale * scale);
    EXPECT_LT((x - chiFromCrossProducts(u, v, w)).norm(), 1e-12 * scale);
    // |u x v|^2 = |u|^2 |v|^2 - <u,v>^2
    EXPECT_NEAR(cross(u, v).squaredNorm(), u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2),
                1e-12 * u.squaredNorm() * v.squaredNorm());
    // u x (u x v) = -|u|^2 v + <u,v> u
    EXPECT_LT((cross(u, cross(u, v)) + u.squaredNorm() * v - u.dot(v) * u).norm(),
              1e-12 * u.squaredNorm() * v.norm());
  }
}

TEST(CalibrationAlgebra, SymbolSquaresToMinusNorm) {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    const Eigen::Vector3d xi(g(rng), g(rng), g(rng));
    const Mat4 s = symbol(xi);
    EXPECT_LT((s * s + xi.squaredNorm() * Mat4::Identity()).norm(), 1e-12 * xi.squaredNorm());
    EXPECT_LT((s + s.transpose()).norm(), 1e-14 * xi.norm());
  }
}

TEST(CalibrationAlgebra, TangentActionIsCliffordOnNormal) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const Mat4 anti = tangentActionOnNormal(a) * tangentActionOnNormal(b) +
                        tangentActionOnNormal(b) * tangentActionOnNormal(a);
      EXPECT_LT((anti + 2.0 * (a == b) * Mat4::Identity()).norm(), 1e-14);
    }
  // column k of sigma_a holds the coordinates of e_a x e_{4+k}
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < 4; ++k) {
      const Vec7 img = tripleCross(basisVector(a), basisVector(3 + k));
      EXPECT_LT((tangentActionOnNormal(a).col(k) - img.tail<4>()).norm(), 1e-15);
      EXPECT_LT(img.head<3>().norm(), 1e-15);
    }
}

TEST(PlaneClassification, StandardPlanes) {
  const Vec7 e[7] = {basisVector(0), basisVector(1), basisVector(2), basisVector(3),
                     basisVector(4), basisVector(5), basisVector(6)};
  EXPECT_TRUE(classifyPlane(std::vector<Vec7>{e[0], e[1], e[2]}, PlaneKind::Associative3).flag);
  EXPECT_TRUE(classifyPlane(std::vector<Vec7>{e[3], e[4], e[5], e[6]}, PlaneKind::Coassociative4).flag);
  EXPECT_FALSE(classifyPlane(std::vector<Vec7>{e[0], e[1], e[3]}, PlaneKind::Associative3).flag);
  // span(e1, e2, e3) rotated by a skewed but still spanning basis
  EXPECT_TRUE(classifyPlane(std::vector<Vec7>{e[0] + e[1], e[1] + 2 * e[2], e[2]}, PlaneKind::Associative3).flag);
}

TEST(PlaneClassification, AssociativeCrossLaw) {
  // span(e1, e2, e3) is closed under x, where (v x w) x u = <u,v> w - <u,w> v
  std::mt19937 rng(5);
  for (int t = 0; t < 100; ++t) {
    Vec7 u = randomVec(rng), v = randomVec(rng), w = randomVec(rng);
    u.tail<4>().setZero();
    v.tail<4>().setZero();
    w.tail<4>().setZero();
    EXPECT_LT(cross(u, v).tail<4>().norm(), 1e-14 * u.norm() * v.norm());
    const Vec7 lhs = cross(cross(v, w), u);
    const Vec7 rhs = u.dot(v) * w - u.dot(w) * v;
    EXPECT_LT((lhs - rhs).norm(), 1e-12 * u.norm() * v.norm() * w.norm());
  }
}

TEST(PlaneClassification, DegenerateBasisThrows) {
  const Vec7 a = basisVector(0);
  try {
    classifyPlane(std::vector<Vec7>{a, 2 * a, basisVector(1)}, PlaneKind::Associative3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateBasis);
  }
  EXPECT_THROW(classifyPlane(std::vector<Vec7>{a, basisVector(1)}, PlaneKind::Associative3), Error);
}
