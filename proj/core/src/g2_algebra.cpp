#include "g2cal/g2_algebra.hpp"

#include "g2cal/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace g2cal {

namespace {

struct Term {
  int i, j, k;
  double sign;
};

// 1-based index triples of the seven monomials of phi.
constexpr std::array<Term, 7> kPhiTerms{{
    {1, 2, 3, +1.0},
    {1, 4, 5, +1.0},
    {1, 6, 7, +1.0},
    {2, 4, 6, +1.0},
    {2, 5, 7, -1.0},
    {3, 4, 7, -1.0},
    {3, 5, 6, -1.0},
}};

template <std::size_t N>
int permutationSign(std::array<int, N> p) {
  int sign = 1;
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = a + 1; b < N; ++b) {
      if (p[a] > p[b]) sign = -sign;
      if (p[a] == p[b]) return 0;
    }
  }
  return sign;
}

} // namespace

Vec7 basisVector(int i) {
  Vec7 e = Vec7::Zero();
  e(i) = 1.0;
  return e;
}

const CalibrationAlgebra& CalibrationAlgebra::standard() {
  static const CalibrationAlgebra algebra;
  return algebra;
}

CalibrationAlgebra::CalibrationAlgebra() {
  // phi, spread over all orderings of each monomial.
  for (const Term& t : kPhiTerms) {
    std::array<int, 3> base{t.i - 1, t.j - 1, t.k - 1};
    std::array<int, 3> p = base;
    std::sort(p.begin(), p.end());
    do {
      phi_[idx3(p[0], p[1], p[2])] = t.sign * permutationSign(p) * permutationSign(base);
    } while (std::next_permutation(p.begin(), p.end()));
  }

  // *e^{ijk} = sgn(i,j,k,l,m,n,p) e^{lmnp} with (l<m<n<p) the complement.
  for (const Term& t : kPhiTerms) {
    std::array<int, 3> tri{t.i - 1, t.j - 1, t.k - 1};
    std::array<int, 4> comp{};
    int c = 0;
    for (int a = 0; a < 7; ++a) {
      if (std::find(tri.begin(), tri.end(), a) == tri.end()) comp[c++] = a;
    }
    std::array<int, 7> full{tri[0], tri[1], tri[2], comp[0], comp[1], comp[2], comp[3]};
    const double coeff = t.sign * permutationSign(full);
    std::array<int, 4> p = comp;
    do {
      starPhi_[idx4(p[0], p[1], p[2], p[3])] = coeff * permutationSign(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }

  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      Vec7 v = Vec7::Zero();
      for (int k = 0; k < 7; ++k) v(k) = phi_[idx3(i, j, k)];
      crossTable_[i * 7 + j] = v;
    }
  }
}

double CalibrationAlgebra::phi(const Vec7& u, const Vec7& v, const Vec7& w) const {
  return u.dot(cross(v, w));
}

double CalibrationAlgebra::starPhi(const Vec7& u, const Vec7& v, const Vec7& w, const Vec7& eta) const {
  return chi(u, v, w).dot(eta);
}

Vec7 CalibrationAlgebra::cross(const Vec7& u, const Vec7& v) const {
  Vec7 out = Vec7::Zero();
  for (int i = 0; i < 7; ++i) {
    if (u(i) == 0.0) continue;
    for (int j = 0; j < 7; ++j) {
      if (v(j) == 0.0) continue;
      out += (u(i) * v(j)) * crossTable_[i * 7 + j];
    }
  }
  return out;
}

Vec7 CalibrationAlgebra::chi(const Vec7& u, const Vec7& v, const Vec7& w) const {
  Vec7 out = Vec7::Zero();
  for (int i = 0; i < 7; ++i) {
    if (u(i) == 0.0) continue;
    for (int j = 0; j < 7; ++j) {
      if (v(j) == 0.0 || j == i) continue;
      for (int k = 0; k < 7; ++k) {
        if (w(k) == 0.0 || k == i || k == j) continue;
        const double uvw = u(i) * v(j) * w(k);
        for (int l = 0; l < 7; ++l) out(l) += uvw * starPhi_[idx4(i, j, k, l)];
      }
    }
  }
  return out;
}

Vec7 chiFromCrossProducts(const Vec7& u, const Vec7& v, const Vec7& w) {
  return -cross(u, cross(v, w)) - u.dot(v) * w + u.dot(w) * v;
}

PlaneClassification classifyPlane(std::span<const Vec7> basis, PlaneKind kind) {
  const std::size_t expected = kind == PlaneKind::Associative3 ? 3 : 4;
  if (basis.size() != expected) {
    throw Error(ErrorKind::DegenerateBasis, "basis has " + std::to_string(basis.size()) + " vectors, expected " +
                                                std::to_string(expected));
  }
  Eigen::Matrix<double, 7, Eigen::Dynamic> B(7, basis.size());
  for (std::size_t a = 0; a < basis.size(); ++a) B.col(a) = basis[a];
  const double gramDet = (B.transpose() * B).determinant();
  if (!(gramDet >= 1e-12)) {
    throw Error(ErrorKind::DegenerateBasis, "Gram determinant " + std::to_string(gramDet) + " < 1e-12");
  }

  // Modified Gram-Schmidt, twice for stability.
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index a = 0; a < B.cols(); ++a) {
      for (Eigen::Index b = 0; b < a; ++b) B.col(a) -= B.col(b).dot(B.col(a)) * B.col(b);
      B.col(a).normalize();
    }
  }

  PlaneClassification out;
  if (kind == PlaneKind::Associative3) {
    out.residual = chi(B.col(0), B.col(1), B.col(2)).norm();
  } else {
    const auto& alg = CalibrationAlgebra::standard();
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        for (int c = b + 1; c < 4; ++c)
          out.residual = std::max(out.residual, std::abs(alg.phi(B.col(a), B.col(b), B.col(c))));
  }
  out.flag = out.residual < 1e-10;
  return out;
}

Mat4 tangentActionOnNormal(int i) {
  Mat4 m;
  const auto& alg = CalibrationAlgebra::standard();
  for (int k = 0; k < 4; ++k) {
    const Vec7& col = alg.crossTable(i, 3 + k);
    for (int l = 0; l < 4; ++l) m(l, k) = col(3 + l);
  }
  return m;
}

Mat4 crossActionOnNormal(const Eigen::Vector3d& t) {
  return t(0) * tangentActionOnNormal(0) + t(1) * tangentActionOnNormal(1) + t(2) * tangentActionOnNormal(2);
}

Mat4 symbol(const Eigen::Vector3d& xi) {
  // s x xi = -(xi x s)
  return -crossActionOnNormal(xi);
}

} // namespace g2cal
