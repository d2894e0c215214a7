#include "g2cal/cy_hodge.hpp"

#include "g2cal/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

namespace g2cal {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix fromTriplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(0.0);
  return m;
}

SparseMatrix diagonal(const Eigen::VectorXd& d) {
  SparseMatrix m(d.size(), d.size());
  m.reserve(Eigen::VectorXi::Constant(d.size(), 1));
  for (Eigen::Index i = 0; i < d.size(); ++i) m.insert(i, i) = d(i);
  m.makeCompressed();
  return m;
}

// ---- cubical complexes -------------------------------------------------------

// Cell of a cubical complex in Z^4: base corner and a bitmask of spanned axes.
struct Cube {
  std::array<int, 4> x{};
  int dirs = 0;
  auto operator<=>(const Cube&) const = default;
};

int popcount(int mask) { return __builtin_popcount(static_cast<unsigned>(mask)); }

class CubicalBuilder {
public:
  // period[a] > 0 makes axis a periodic.
  explicit CubicalBuilder(std::array<int, 4> period) : period_(period) {}

  void addTopCell(std::array<int, 4> x, int dirs) {
    x = wrap(x);
    top_.push_back({x, dirs});
    // every sub-cell: choose a subset of spanned axes, offset along the rest
    for (int sub = dirs;; sub = (sub - 1) & dirs) {
      const int rest = dirs & ~sub;
      for (int off = rest;; off = (off - 1) & rest) {
        std::array<int, 4> y = x;
        for (int a = 0; a < 4; ++a)
          if (off & (1 << a)) ++y[a];
        cofaces_[Cube{wrap(y), sub}] += 1;
        if (off == 0) break;
      }
      if (sub == 0) break;
    }
  }

  DECComplex build(const std::string& label, double h) {
    DECComplex dec;
    dec.label = label;
    std::array<std::map<Cube, int>, 4> index;
    for (const auto& [cell, count] : cofaces_) {
      const int k = popcount(cell.dirs);
      if (k < 3) index[k].emplace(cell, 0);
    }
    for (const auto& c : top_) index[3].emplace(c, 0);
    for (int k = 0; k < 4; ++k) {
      int next = 0;
      for (auto& [cell, id] : index[k]) id = next++;
      dec.cellCount[k] = next;
      dec.star[k].resize(next);
      for (const auto& [cell, id] : index[k]) {
        const int incident = cofaces_.at(cell);
        dec.star[k](id) = incident * std::pow(h / 2, 3 - k) / std::pow(h, k);
      }
    }
    std::array<SparseMatrix*, 3> d{&dec.d0, &dec.d1, &dec.d2};
    for (int k = 1; k <= 3; ++k) {
      Triplets t;
      for (const auto& [cell, id] : index[k]) {
        int j = 0;
        for (int a = 0; a < 4; ++a) {
          if (!(cell.dirs & (1 << a))) continue;
          const double sign = (j % 2 == 0) ? 1.0 : -1.0;
          const int faceDirs = cell.dirs & ~(1 << a);
          std::array<int, 4> y = cell.x;
          ++y[a];
          t.emplace_back(id, index[k - 1].at(Cube{wrap(y), faceDirs}), sign);
          t.emplace_back(id, index[k - 1].at(Cube{cell.x, faceDirs}), -sign);
          ++j;
        }
      }
      *d[k - 1] = fromTriplets(dec.cellCount[k], dec.cellCount[k - 1], t);
    }
    return dec;
  }

private:
  std::array<int, 4> wrap(std::array<int, 4> x) const {
    for (int a = 0; a < 4; ++a)
      if (period_[a] > 0) x[a] = ((x[a] % period_[a]) + period_[a]) % period_[a];
    return x;
  }

  std::array<int, 4> period_;
  std::vector<Cube> top_;
  std::map<Cube, int> cofaces_;
};

// ---- simplicial complexes ----------------------------------------------------

Eigen::VectorXd circumcentre(const std::vector<Eigen::VectorXd>& p) {
  const auto k = static_cast<Eigen::Index>(p.size() - 1);
  Eigen::MatrixXd P(p[0].size(), k);
  for (Eigen::Index i = 0; i < k; ++i) P.col(i) = p[i + 1] - p[0];
  const Eigen::MatrixXd G = P.transpose() * P;
  const Eigen::VectorXd lambda = G.ldlt().solve(0.5 * G.diagonal());
  return p[0] + P * lambda;
}

Eigen::VectorXd point(const Domain& domain, int i) { return domain.nodes[i]; }

} // namespace

DECComplex buildCubicalTorus(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidResolution, "cubical torus needs n >= 3");
  CubicalBuilder b({n, n, n, 0});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) b.addTopCell({i, j, k, 0}, 0b0111);
  return b.build("T3 cubical n=" + std::to_string(n), 1.0 / n);
}

DECComplex buildCubicalSphere3(int m) {
  if (m < 1) throw Error(ErrorKind::InvalidResolution, "sphere fixture needs m >= 1");
  CubicalBuilder b({0, 0, 0, 0});
  for (int axis = 0; axis < 4; ++axis) {
    const int dirs = 0b1111 & ~(1 << axis);
    for (int side : {0, m}) {
      std::array<int, 3> free{};
      int f = 0;
      for (int a = 0; a < 4; ++a)
        if (a != axis) free[f++] = a;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) {
            std::array<int, 4> x{};
            x[axis] = side;
            x[free[0]] = i;
            x[free[1]] = j;
            x[free[2]] = k;
            b.addTopCell(x, dirs);
          }
    }
  }
  return b.build("S3 cubical m=" + std::to_string(m), 1.0 / m);
}

DECComplex buildCubicalS1xS2(int m, int k) {
  if (m < 1 || k < 3) throw Error(ErrorKind::InvalidResolution, "S1xS2 fixture needs m >= 1, k >= 3");
  CubicalBuilder b({0, 0, 0, k});
  for (int axis = 0; axis < 3; ++axis) {
    const int dirs = (0b0111 & ~(1 << axis)) | 0b1000;
    const int a0 = (axis + 1) % 3, a1 = (axis + 2) % 3;
    for (int side : {0, m})
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int t = 0; t < k; ++t) {
            std::array<int, 4> x{};
            x[axis] = side;
            x[a0] = i;
            x[a1] = j;
            x[3] = t;
            b.addTopCell(x, dirs);
          }
  }
  return b.build("S1xS2 cubical m=" + std::to_string(m) + " k=" + std::to_string(k), 1.0 / m);
}

DECComplex buildSimplicialDec(const Domain& domain) {
  DECComplex dec;
  dec.label = domain.label.empty() ? "simplicial" : domain.label;

  std::map<std::array<int, 2>, int> edges;
  std::map<std::array<int, 3>, int> faces;
  std::vector<std::array<int, 4>> tets;
  for (auto t : domain.cells) {
    std::sort(t.begin(), t.end());
    tets.push_back(t);
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> f{};
      for (int i = 0, j = 0; i < 4; ++i)
        if (i != skip) f[j++] = t[i];
      faces.emplace(f, 0);
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) edges.emplace(std::array<int, 2>{f[a], f[b]}, 0);
    }
  }
  int next = 0;
  for (auto& [e, id] : edges) id = next++;
  next = 0;
  for (auto& [f, id] : faces) id = next++;
  const int nv = domain.nodeCount();
  const int ne = static_cast<int>(edges.size()), nf = static_cast<int>(faces.size());
  const int nt = static_cast<int>(tets.size());
  dec.cellCount = {nv, ne, nf, nt};

  Triplets t0, t1, t2;
  for (const auto& [e, id] : edges) {
    t0.emplace_back(id, e[0], -1.0);
    t0.emplace_back(id, e[1], 1.0);
  }
  for (const auto& [f, id] : faces) {
    t1.emplace_back(id, edges.at({f[1], f[2]}), 1.0);
    t1.emplace_back(id, edges.at({f[0], f[2]}), -1.0);
    t1.emplace_back(id, edges.at({f[0], f[1]}), 1.0);
  }
  for (int c = 0; c < nt; ++c) {
    const auto& t = tets[c];
    t2.emplace_back(c, faces.at({t[1], t[2], t[3]}), 1.0);
    t2.emplace_back(c, faces.at({t[0], t[2], t[3]}), -1.0);
    t2.emplace_back(c, faces.at({t[0], t[1], t[3]}), 1.0);
    t2.emplace_back(c, faces.at({t[0], t[1], t[2]}), -1.0);
  }
  dec.d0 = fromTriplets(ne, nv, t0);
  dec.d1 = fromTriplets(nf, ne, t1);
  dec.d2 = fromTriplets(nt, nf, t2);

  Eigen::VectorXd dual0 = Eigen::VectorXd::Zero(nv), dual1 = Eigen::VectorXd::Zero(ne);
  Eigen::VectorXd dual2 = Eigen::VectorXd::Zero(nf);
  dec.star[3].resize(nt);
  const auto vols = tetVolumes(domain);
  for (int c = 0; c < nt; ++c) {
    const auto& t = tets[c];
    dec.star[3](c) = 1.0 / std::abs(vols[c]);
    const Eigen::VectorXd ccT = circumcentre({point(domain, t[0]), point(domain, t[1]), point(domain, t[2]), point(domain, t[3])});
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> f{};
      for (int i = 0, j = 0; i < 4; ++i)
        if (i != skip) f[j++] = t[i];
      const Eigen::VectorXd ccF = circumcentre({point(domain, f[0]), point(domain, f[1]), point(domain, f[2])});
      const double sFT = (ccT - ccF).dot(point(domain, t[skip]) - ccF) >= 0 ? 1.0 : -1.0;
      const double dFT = sFT * (ccT - ccF).norm();
      dual2(faces.at(f)) += dFT;
      for (int skipE = 0; skipE < 3; ++skipE) {
        std::array<int, 2> e{};
        for (int i = 0, j = 0; i < 3; ++i)
          if (i != skipE) e[j++] = f[i];
        const Eigen::VectorXd ccE = 0.5 * (point(domain, e[0]) + point(domain, e[1]));
        const double sEF = (ccF - ccE).dot(point(domain, f[skipE]) - ccE) >= 0 ? 1.0 : -1.0;
        const double dEF = sEF * (ccF - ccE).norm();
        const double len = (point(domain, e[1]) - point(domain, e[0])).norm();
        dual1(edges.at(e)) += 0.5 * dEF * dFT;
        for (int v : e) dual0(v) += (len / 2) * dEF * dFT / 6.0;
      }
    }
  }
  dec.star[0] = dual0;
  dec.star[1].resize(ne);
  for (const auto& [e, id] : edges) dec.star[1](id) = dual1(id) / (point(domain, e[1]) - point(domain, e[0])).norm();
  dec.star[2].resize(nf);
  for (const auto& [f, id] : faces) {
    const Eigen::VectorXd a = point(domain, f[1]) - point(domain, f[0]);
    const Eigen::VectorXd b = point(domain, f[2]) - point(domain, f[0]);
    const double area = 0.5 * std::sqrt(std::max(0.0, a.squaredNorm() * b.squaredNorm() - std::pow(a.dot(b), 2)));
    dec.star[2](id) = dual2(id) / area;
  }
  for (int k = 0; k < 4; ++k)
    if (dec.star[k].size() > 0 && dec.star[k].minCoeff() <= 0.0)
      throw Error(ErrorKind::NonWellCenteredMesh,
                  "non-positive circumcentric dual volume for " + std::to_string(k) + "-cells");
  return dec;
}

void requireClosed(const DECComplex& dec) {
  Eigen::VectorXi count = Eigen::VectorXi::Zero(dec.cellCount[2]);
  for (int c = 0; c < dec.d2.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(dec.d2, c); it; ++it) ++count(it.col());
  for (int f = 0; f < count.size(); ++f)
    if (count(f) != 2)
      throw Error(ErrorKind::NonClosedComplex,
                  "face " + std::to_string(f) + " has " + std::to_string(count(f)) + " cofaces");
}

DECComplex buildDec(const Domain& domain) {
  DECComplex dec = domain.kind == DomainKind::PeriodicGrid ? buildCubicalTorus(domain.gridN) : buildSimplicialDec(domain);
  requireClosed(dec);
  return dec;
}

SparseMatrix assembleDvee(const DECComplex& dec) {
  const auto [nv, ne, nf, nt] = dec.cellCount;
  const SparseMatrix star0inv = diagonal(dec.star[0].cwiseInverse());
  const SparseMatrix a = -(diagonal(dec.star[2]) * dec.d1);
  const SparseMatrix b = dec.d2.transpose();
  const SparseMatrix c = -(star0inv * SparseMatrix(dec.d0.transpose()) * diagonal(dec.star[1]));
  Triplets t;
  for (const auto& [block, r0, c0] : {std::tuple{&a, 0, 0}, std::tuple{&b, 0, ne}, std::tuple{&c, nf, 0}})
    for (int k = 0; k < block->outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(*block, k); it; ++it)
        t.emplace_back(static_cast<int>(it.row()) + r0, static_cast<int>(it.col()) + c0, it.value());
  return fromTriplets(nf + nv, ne + nt, t);
}

SparseMatrix assembleDveeAdjoint(const DECComplex& dec) {
  const auto [nv, ne, nf, nt] = dec.cellCount;
  const SparseMatrix a = -(diagonal(dec.star[1].cwiseInverse()) * SparseMatrix(dec.d1.transpose()));
  const SparseMatrix b = -dec.d0;
  const SparseMatrix c = diagonal(dec.star[3]) * dec.d2 * diagonal(dec.star[2].cwiseInverse());
  Triplets t;
  for (const auto& [block, r0, c0] : {std::tuple{&a, 0, 0}, std::tuple{&b, 0, nf}, std::tuple{&c, ne, 0}})
    for (int k = 0; k < block->outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(*block, k); it; ++it)
        t.emplace_back(static_cast<int>(it.row()) + r0, static_cast<int>(it.col()) + c0, it.value());
  return fromTriplets(ne + nt, nf + nv, t);
}

SparseMatrix assembleHodgeLaplacian(const DECComplex& dec) {
  const auto [nv, ne, nf, nt] = dec.cellCount;
  (void)nv;
  (void)nf;
  // codifferential delta_k = *_{k-1}^{-1} d_{k-1}^T *_k
  auto delta = [&](int k, const SparseMatrix& dPrev) {
    return SparseMatrix(diagonal(dec.star[k - 1].cwiseInverse()) * SparseMatrix(dPrev.transpose()) * diagonal(dec.star[k]));
  };
  const SparseMatrix delta1 = delta(1, dec.d0);
  const SparseMatrix delta2 = delta(2, dec.d1);
  const SparseMatrix delta3 = delta(3, dec.d2);
  const SparseMatrix lap1 = delta2 * dec.d1 + dec.d0 * delta1;
  const SparseMatrix lap3 = dec.d2 * delta3;
  // tau is the dual 0-form *3 omega of a 3-form omega
  const SparseMatrix lapTau = diagonal(dec.star[3]) * lap3 * diagonal(dec.star[3].cwiseInverse());
  Triplets t;
  for (const auto& [block, off] : {std::pair{&lap1, 0}, std::pair{&lapTau, ne}})
    for (int k = 0; k < block->outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(*block, k); it; ++it)
        t.emplace_back(static_cast<int>(it.row()) + off, static_cast<int>(it.col()) + off, it.value());
  return fromTriplets(ne + nt, ne + nt, t);
}

Eigen::VectorXd dveeInputWeights(const DECComplex& dec) {
  Eigen::VectorXd w(dec.cellCount[1] + dec.cellCount[3]);
  w << dec.star[1], dec.star[3].cwiseInverse();
  return w;
}

namespace {
Eigen::VectorXd outputWeights(const DECComplex& dec) {
  Eigen::VectorXd w(dec.cellCount[2] + dec.cellCount[0]);
  w << dec.star[2].cwiseInverse(), dec.star[0];
  return w;
}
} // namespace

SparseMatrix weightedDvee(const DECComplex& dec) {
  return diagonal(outputWeights(dec).cwiseSqrt()) * assembleDvee(dec) *
         diagonal(dveeInputWeights(dec).cwiseSqrt().cwiseInverse());
}

DveeCheck dveeSquareCheck(const DECComplex& dec, int trials, unsigned seed) {
  DveeCheck out;
  out.trials = trials;
  const SparseMatrix dd1 = dec.d1 * dec.d0, dd2 = dec.d2 * dec.d1;
  for (const auto* m : {&dd1, &dd2})
    for (int k = 0; k < m->outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(*m, k); it; ++it) out.ddResidual = std::max(out.ddResidual, std::abs(it.value()));
  out.minStar = std::numeric_limits<double>::infinity();
  for (const auto& s : dec.star) out.minStar = std::min(out.minStar, s.minCoeff());

  const SparseMatrix D = assembleDvee(dec), Dp = assembleDveeAdjoint(dec);
  const SparseMatrix square = Dp * D;
  const SparseMatrix lap = assembleHodgeLaplacian(dec);
  const Eigen::VectorXd win = dveeInputWeights(dec), wout = outputWeights(dec);

  const int nt = dec.cellCount[3];
  const SparseMatrix tauBlock = square.bottomRightCorner(nt, nt);
  const SparseMatrix expected = diagonal(dec.star[3]) * dec.d2 * diagonal(dec.star[2].cwiseInverse()) *
                                SparseMatrix(dec.d2.transpose());
  out.tauBlockResidual = Eigen::MatrixXd(tauBlock - expected).cwiseAbs().maxCoeff() /
                         std::max(1.0, Eigen::MatrixXd(expected).cwiseAbs().maxCoeff());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto draw = [&](Eigen::Index n) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = normal(rng);
    return x;
  };
  const double scale = std::max(1.0, Eigen::MatrixXd(lap).cwiseAbs().rowwise().sum().maxCoeff());
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd x = draw(D.cols());
    const Eigen::VectorXd y = draw(D.rows());
    out.squareResidual = std::max(out.squareResidual, (square * x - lap * x).norm() / (scale * x.norm()));
    const double lhs = (D * x).dot(wout.cwiseProduct(y));
    const double rhs = x.dot(win.cwiseProduct(Dp * y));
    const double norm = std::sqrt(x.dot(win.cwiseProduct(x)) * y.dot(wout.cwiseProduct(y))) *
                        std::max(1.0, std::sqrt(scale));
    out.pairingResidual = std::max(out.pairingResidual, std::abs(lhs - rhs) / norm);
  }
  return out;
}

Betti betti(const DECComplex& dec) {
  const int r0 = matrixRank(dec.d0), r1 = matrixRank(dec.d1), r2 = matrixRank(dec.d2);
  Betti b;
  b.b = {dec.cellCount[0] - r0, dec.cellCount[1] - r0 - r1, dec.cellCount[2] - r1 - r2, dec.cellCount[3] - r2};
  return b;
}

CYKernel cyKernelDim(const DECComplex& dec, std::optional<double> absTol, double gapRatio) {
  CYKernel out;
  const SparseMatrix A = weightedDvee(dec);
  out.estimate = detectKernel(A, absTol, gapRatio, 10);
  const Eigen::VectorXd scaleIn = dveeInputWeights(dec).cwiseSqrt().cwiseInverse();
  const int ne = dec.cellCount[1], nt = dec.cellCount[3];
  const SparseMatrix codiff = SparseMatrix(dec.d0.transpose()) * diagonal(dec.star[1]);
  const SparseMatrix d2t = dec.d2.transpose();
  for (Eigen::Index j = 0; j < out.estimate.basis.cols(); ++j) {
    const Eigen::VectorXd x = scaleIn.cwiseProduct(out.estimate.basis.col(j));
    const Eigen::VectorXd alpha = x.head(ne), tau = x.tail(nt);
    // exact for harmonic alpha and constant tau
    const double r = (dec.d1 * alpha).norm() + (codiff * alpha).norm() + (d2t * tau).norm();
    out.decompositionResidual = std::max(out.decompositionResidual, r / x.norm());
  }
  return out;
}

} // namespace g2cal
