#include "g2cal/dirac.hpp"

#include "g2cal/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace g2cal {

namespace {

constexpr double kPi = 3.14159265358979323846;

using RowMat4 = Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor>;

Eigen::Map<const RowMat4> asRows(const NormalField& psi) {
  return Eigen::Map<const RowMat4>(psi.data(), psi.size() / 4, 4);
}

NormalField fromRows(const Eigen::MatrixXd& rows) {
  RowMat4 r = rows;
  return Eigen::Map<const NormalField>(r.data(), r.size());
}

bool cellsAreFlat(const Domain& domain) {
  for (const Vec7& x : domain.nodes)
    if (!x.tail<4>().isZero(0.0)) return false;
  return !domain.cells.empty();
}

SparseMatrix kronWithSigma(const SparseMatrix& g, const Mat4& sigma) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int col = 0; col < g.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(g, col); it; ++it)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          if (sigma(k, l) != 0.0) trips.emplace_back(4 * it.row() + k, 4 * it.col() + l, it.value() * sigma(k, l));
  SparseMatrix out(4 * g.rows(), 4 * g.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseMatrix p1LeastSquares(const Domain& domain, const std::array<Mat4, 3>& sigma) {
  std::vector<Eigen::Triplet<double>> trips;
  const auto vols = tetVolumes(domain);
  for (std::size_t t = 0; t < domain.cells.size(); ++t) {
    const auto& c = domain.cells[t];
    Eigen::Matrix3d edges;
    for (int a = 0; a < 3; ++a) edges.col(a) = (domain.nodes[c[a + 1]] - domain.nodes[c[0]]).head<3>();
    // Rows of the inverse are the gradients of barycentric coordinates 1..3.
    const Eigen::Matrix3d inv = edges.inverse();
    std::array<Vec3, 4> grad;
    grad[1] = inv.row(0).transpose();
    grad[2] = inv.row(1).transpose();
    grad[3] = inv.row(2).transpose();
    grad[0] = -(grad[1] + grad[2] + grad[3]);
    const double scale = std::sqrt(std::abs(vols[t]));
    for (int a = 0; a < 4; ++a) {
      const Mat4 block = scale * (grad[a](0) * sigma[0] + grad[a](1) * sigma[1] + grad[a](2) * sigma[2]);
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          if (block(k, l) != 0.0) trips.emplace_back(4 * static_cast<int>(t) + k, 4 * c[a] + l, block(k, l));
    }
  }
  SparseMatrix L(4 * static_cast<int>(domain.cells.size()), 4 * domain.nodeCount());
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

} // namespace

AssembledOperator assembleD(const Domain& domain) {
  if (!domain.hasFrames()) throw Error(ErrorKind::MissingFrames, "operator assembly needs frames");
  AssembledOperator op;
  op.domain = &domain;
  op.gradient = std::make_shared<NodalGradient>(domain);
  for (int a = 0; a < 3; ++a) op.sigma[a] = tangentActionOnNormal(a);
  op.matrix.resize(4 * domain.nodeCount(), 4 * domain.nodeCount());
  for (int a = 0; a < 3; ++a) op.matrix += kronWithSigma((*op.gradient)[a], op.sigma[a]);
  op.weights = nodalWeights(domain);
  if (domain.kind != DomainKind::PeriodicGrid && cellsAreFlat(domain)) op.leastSquares = p1LeastSquares(domain, op.sigma);
  return op;
}

NormalField applyD(const AssembledOperator& op, const NormalField& psi) {
  const Eigen::MatrixXd rows = asRows(psi);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows.rows(), 4);
  for (int a = 0; a < 3; ++a) out += op.gradient->differentiate(a, rows) * op.sigma[a].transpose();
  return fromRows(out);
}

NormalField applyRoughLaplacian(const AssembledOperator& op, const NormalField& psi) {
  const Eigen::MatrixXd rows = asRows(psi);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows.rows(), 4);
  for (int a = 0; a < 3; ++a) out -= op.gradient->differentiate(a, op.gradient->differentiate(a, rows));
  return fromRows(out);
}

SparseMatrix constraintBasis(int nodeCount, const BoundaryCondition& bc) {
  std::vector<int> slot(nodeCount, -1);
  for (std::size_t k = 0; k < bc.nodes.size(); ++k) slot[bc.nodes[k]] = static_cast<int>(k);
  std::vector<Eigen::Triplet<double>> trips;
  int col = 0;
  for (int i = 0; i < nodeCount; ++i) {
    if (slot[i] < 0) {
      for (int c = 0; c < 4; ++c) trips.emplace_back(4 * i + c, col++, 1.0);
    } else {
      const auto& b = bc.basis[slot[i]];
      for (int j = 0; j < 2; ++j, ++col)
        for (int c = 0; c < 4; ++c)
          if (b(c, j) != 0.0) trips.emplace_back(4 * i + c, col, b(c, j));
    }
  }
  SparseMatrix Q(4 * nodeCount, col);
  Q.setFromTriplets(trips.begin(), trips.end());
  return Q;
}

namespace {

SparseMatrix scaledBasis(const AssembledOperator& op, const BoundaryCondition* bc) {
  const int n = op.domain->nodeCount();
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 4; ++c) trips.emplace_back(4 * i + c, 4 * i + c, 1.0 / std::sqrt(op.weights(i)));
  SparseMatrix S(4 * n, 4 * n);
  S.setFromTriplets(trips.begin(), trips.end());
  if (!bc) return S;
  return S * constraintBasis(n, *bc);
}

} // namespace

SparseMatrix analyzedOperator(const AssembledOperator& op, const BoundaryCondition* bc) {
  if (op.domain->kind == DomainKind::PeriodicGrid) {
    if (bc) throw Error(ErrorKind::ConfigError, "the periodic grid has no boundary");
    return torusBandLimit(op).restricted;
  }
  if (op.leastSquares.size() == 0)
    throw Error(ErrorKind::ConfigError, "spectral analysis needs a flat tetrahedral domain");
  return op.leastSquares * scaledBasis(op, bc);
}

NormalField kernelVectorToField(const AssembledOperator& op, const BoundaryCondition* bc, const Eigen::VectorXd& x) {
  if (op.domain->kind == DomainKind::PeriodicGrid) return torusBandLimit(op).embed(x);
  return scaledBasis(op, bc) * x;
}

std::vector<double> spectrum(const AssembledOperator& op, const BoundaryCondition* bc, int count) {
  const SparseMatrix A = analyzedOperator(op, bc);
  Eigen::VectorXd values;
  if (op.domain->kind == DomainKind::PeriodicGrid) {
    values = smallestMagnitudeEigenvalues(A, count);
  } else {
    values = smallestSingularValues(A, count <= 0 ? static_cast<int>(A.cols()) : count).values;
  }
  return {values.data(), values.data() + values.size()};
}

KernelEstimate kernelDim(const AssembledOperator& op, const BoundaryCondition* bc, std::optional<double> absTol,
                         double gapRatio, int count) {
  return detectKernel(analyzedOperator(op, bc), absTol, gapRatio, count);
}

TorusBandLimit torusBandLimit(const AssembledOperator& op) {
  const Domain& domain = *op.domain;
  if (domain.kind != DomainKind::PeriodicGrid) throw Error(ErrorKind::ConfigError, "band limit needs the torus grid");
  TorusBandLimit band;
  band.n = domain.gridN;
  band.k = (band.n - 1) / 2;
  band.m = 2 * band.k + 1;
  const int N = band.n, m = band.m;

  band.basis1d.resize(N, m);
  for (int j = 0; j < N; ++j) {
    band.basis1d(j, 0) = 1.0 / std::sqrt(static_cast<double>(N));
    for (int k = 1; k <= band.k; ++k) {
      const double angle = 2 * kPi * k * j / N;
      band.basis1d(j, 2 * k - 1) = std::sqrt(2.0 / N) * std::cos(angle);
      band.basis1d(j, 2 * k) = std::sqrt(2.0 / N) * std::sin(angle);
    }
  }
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    delta(j, (j + 1) % N) += 0.5 / domain.spacing;
    delta(j, (j + N - 1) % N) -= 0.5 / domain.spacing;
  }
  const Eigen::MatrixXd R = band.basis1d.transpose() * delta * band.basis1d;
  const double cutoff = 1e-13 * R.cwiseAbs().maxCoeff();
  band.difference1d = R.sparseView(1.0, cutoff);

  std::vector<Eigen::Triplet<double>> trips;
  auto idx = [m](int p, int q, int r) { return p + m * (q + m * r); };
  for (int axis = 0; axis < 3; ++axis) {
    const Mat4& sigma = op.sigma[axis];
    for (int col = 0; col < band.difference1d.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(band.difference1d, col); it; ++it)
        for (int s = 0; s < m; ++s)
          for (int t = 0; t < m; ++t) {
            int row = 0, column = 0;
            const int r1 = static_cast<int>(it.row()), c1 = static_cast<int>(it.col());
            if (axis == 0) {
              row = idx(r1, s, t);
              column = idx(c1, s, t);
            } else if (axis == 1) {
              row = idx(s, r1, t);
              column = idx(s, c1, t);
            } else {
              row = idx(s, t, r1);
              column = idx(s, t, c1);
            }
            for (int k = 0; k < 4; ++k)
              for (int l = 0; l < 4; ++l)
                if (sigma(k, l) != 0.0) trips.emplace_back(4 * row + k, 4 * column + l, it.value() * sigma(k, l));
          }
  }
  band.restricted.resize(4 * m * m * m, 4 * m * m * m);
  band.restricted.setFromTriplets(trips.begin(), trips.end());
  return band;
}

NormalField TorusBandLimit::embed(const Eigen::VectorXd& coefficients) const {
  const int N = n;
  // Apply the 1D basis along each axis in turn; layout index = p + m q + m^2 r.
  std::vector<double> cur(coefficients.data(), coefficients.data() + coefficients.size());
  std::array<int, 3> dims{m, m, m};
  for (int axis = 0; axis < 3; ++axis) {
    std::array<int, 3> out = dims;
    out[axis] = N;
    std::vector<double> next(static_cast<std::size_t>(out[0]) * out[1] * out[2] * 4, 0.0);
    for (int r = 0; r < out[2]; ++r)
      for (int q = 0; q < out[1]; ++q)
        for (int p = 0; p < out[0]; ++p) {
          std::array<int, 3> o{p, q, r};
          double acc[4] = {0, 0, 0, 0};
          for (int j = 0; j < dims[axis]; ++j) {
            std::array<int, 3> s = o;
            s[axis] = j;
            const double b = basis1d(o[axis], j);
            const std::size_t src = 4 * (static_cast<std::size_t>(s[0]) + dims[0] * (s[1] + static_cast<std::size_t>(dims[1]) * s[2]));
            for (int c = 0; c < 4; ++c) acc[c] += b * cur[src + c];
          }
          const std::size_t dst = 4 * (static_cast<std::size_t>(p) + out[0] * (q + static_cast<std::size_t>(out[1]) * r));
          for (int c = 0; c < 4; ++c) next[dst + c] = acc[c];
        }
    cur.swap(next);
    dims = out;
  }
  return Eigen::Map<const NormalField>(cur.data(), static_cast<Eigen::Index>(cur.size()));
}

double weightedNorm(const AssembledOperator& op, const NormalField& psi, const std::vector<char>* mask) {
  const auto rows = asRows(psi);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    if (!mask || (*mask)[i]) sum += op.weights(i) * rows.row(i).squaredNorm();
  return std::sqrt(sum);
}

namespace {

NormalField applyNormalOperator(const SimonsField* simons, const NormalField& psi) {
  NormalField out = NormalField::Zero(psi.size());
  if (!simons) return out;
  for (Eigen::Index i = 0; i < psi.size() / 4; ++i)
    out.segment<4>(4 * i) = simons->normalOperator[i] * psi.segment<4>(4 * i);
  return out;
}

} // namespace

double weitzenboeckResidual(const AssembledOperator& op, const SimonsField* simons, const NormalField& psi,
                            const std::vector<char>* mask) {
  const NormalField d2 = applyD(op, applyD(op, psi));
  const NormalField rhs = applyRoughLaplacian(op, psi) + applyNormalOperator(simons, psi);
  const double denom = weightedNorm(op, psi, mask);
  return denom > 0 ? weightedNorm(op, d2 - rhs, mask) / denom : 0.0;
}

double closedBochnerResidual(const AssembledOperator& op, const SimonsField* simons, const NormalField& psi) {
  const Eigen::MatrixXd rows = asRows(psi);
  double gradient = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Eigen::MatrixXd d = op.gradient->differentiate(a, rows);
    for (Eigen::Index i = 0; i < d.rows(); ++i) gradient += op.weights(i) * d.row(i).squaredNorm();
  }
  const NormalField d2 = applyD(op, applyD(op, psi));
  const NormalField r = applyNormalOperator(simons, psi);
  double d2Term = 0.0, rTerm = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    d2Term += op.weights(i) * d2.segment<4>(4 * i).dot(psi.segment<4>(4 * i));
    rTerm += op.weights(i) * r.segment<4>(4 * i).dot(psi.segment<4>(4 * i));
  }
  return std::abs(gradient - d2Term + rTerm);
}

std::vector<Vec7> toAmbient(const Domain& domain, const NormalField& psi) {
  std::vector<Vec7> out(domain.nodeCount(), Vec7::Zero());
  for (int i = 0; i < domain.nodeCount(); ++i)
    for (int k = 0; k < 4; ++k) out[i] += psi(4 * i + k) * domain.normalFrame[i][k];
  return out;
}

double adjointnessResidual(const AssembledOperator& op, const NormalField& s, const NormalField& sPrime) {
  const Domain& domain = *op.domain;
  const NormalField ds = applyD(op, s);
  const NormalField dsp = applyD(op, sPrime);
  double volume = 0.0;
  for (int i = 0; i < domain.nodeCount(); ++i)
    volume += op.weights(i) *
              (ds.segment<4>(4 * i).dot(sPrime.segment<4>(4 * i)) - s.segment<4>(4 * i).dot(dsp.segment<4>(4 * i)));
  double boundary = 0.0;
  if (domain.boundary) {
    const SurfaceMesh& surf = *domain.boundary;
    const auto S = toAmbient(domain, s);
    const auto Sp = toAmbient(domain, sPrime);
    for (int b = 0; b < surf.vertexCount(); ++b) {
      const int node = surf.volumeNode[b];
      boundary += cross(lift(surf.areaNormal[b]), S[node]).dot(Sp[node]);
    }
  }
  const double scale = weightedNorm(op, s) * weightedNorm(op, sPrime);
  return scale > 0 ? std::abs(volume + boundary) / scale : 0.0;
}

std::vector<Vec7> evaluateF(const Domain& domain, const NodalGradient& grad, const std::vector<Vec7>& displacement) {
  if (!domain.hasFrames()) throw Error(ErrorKind::MissingFrames, "defect evaluation needs tangent frames");
  const int n = domain.nodeCount();
  Eigen::MatrixXd U(n, 7);
  for (int i = 0; i < n; ++i) U.row(i) = displacement[i].transpose();
  std::array<Eigen::MatrixXd, 3> dU;
  for (int a = 0; a < 3; ++a) dU[a] = grad.differentiate(a, U);
  std::vector<Vec7> out(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Matrix<double, 7, 3> T;
    for (int a = 0; a < 3; ++a) T.col(a) = domain.tangentFrame[i][a] + dU[a].row(i).transpose();
    const double gram = (T.transpose() * T).determinant();
    if (!(gram >= 1e-12)) {
      throw Error(ErrorKind::DegenerateCell,
                  "tangent triple at node " + std::to_string(i) + " has Gram determinant " + std::to_string(gram));
    }
    out[i] = chi(T.col(0), T.col(1), T.col(2)) / std::sqrt(gram);
  }
  return out;
}

LinearizationSweep linearizationCheck(const AssembledOperator& op, const NormalField& psi,
                                      const std::vector<double>& steps) {
  const Domain& domain = *op.domain;
  const auto base = toAmbient(domain, psi);
  const auto dpsi = toAmbient(domain, applyD(op, psi));
  double dnorm = 0.0;
  for (const Vec7& v : dpsi) dnorm += v.squaredNorm();
  dnorm = std::sqrt(dnorm);

  LinearizationSweep sweep;
  sweep.best = std::numeric_limits<double>::infinity();
  for (double eps : steps) {
    std::vector<Vec7> plus(base.size()), minus(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      plus[i] = eps * base[i];
      minus[i] = -eps * base[i];
    }
    const auto fp = evaluateF(domain, *op.gradient, plus);
    const auto fm = evaluateF(domain, *op.gradient, minus);
    double err = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) err += ((fp[i] - fm[i]) / (2 * eps) - dpsi[i]).squaredNorm();
    const double rel = dnorm > 0 ? std::sqrt(err) / dnorm : std::sqrt(err);
    sweep.steps.push_back(eps);
    sweep.relativeErrors.push_back(rel);
    if (rel < sweep.best) {
      sweep.best = rel;
      sweep.bestStep = eps;
    }
  }
  return sweep;
}

NormalField smoothRandomField(const Domain& domain, unsigned seed, int modes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  struct Mode {
    Vec3 k;
    double amplitude, phase;
  };
  std::array<std::vector<Mode>, 4> comp;
  for (auto& c : comp)
    for (int j = 0; j < modes; ++j) {
      Mode md;
      md.k = kPi * Vec3(unit(rng), unit(rng), unit(rng));
      md.amplitude = unit(rng);
      md.phase = kPi * unit(rng);
      c.push_back(md);
    }
  NormalField psi(4 * domain.nodeCount());
  for (int i = 0; i < domain.nodeCount(); ++i) {
    const Vec3 x = domain.nodes[i].head<3>();
    for (int c = 0; c < 4; ++c) {
      double v = 0.0;
      for (const Mode& md : comp[c]) v += md.amplitude * std::sin(md.k.dot(x) + md.phase);
      psi(4 * i + c) = v;
    }
  }
  return psi;
}

NormalField constantField(const Domain& domain, const Eigen::Vector4d& c) {
  NormalField psi(4 * domain.nodeCount());
  for (int i = 0; i < domain.nodeCount(); ++i) psi.segment<4>(4 * i) = c;
  return psi;
}

NormalField bandLimitedRandomField(const AssembledOperator& op, const TorusBandLimit& band, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd coeff(4 * band.m * band.m * band.m);
  for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) = normal(rng);
  NormalField psi = band.embed(coeff);
  return psi / weightedNorm(op, psi);
}

std::vector<char> interiorMask(const Domain& domain, double fraction) {
  double minRadius = std::numeric_limits<double>::infinity();
  if (domain.boundary)
    for (const Vec3& p : domain.boundary->points) minRadius = std::min(minRadius, p.norm());
  std::vector<char> mask(domain.nodeCount(), 1);
  for (int i = 0; i < domain.nodeCount(); ++i) mask[i] = domain.nodes[i].norm() < fraction * minRadius;
  return mask;
}

} // namespace g2cal
