#include "g2cal/boundary.hpp"

#include "g2cal/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

namespace g2cal {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec7 projectOnto(const std::array<Vec7, 2>& plane, const Vec7& x) {
  return plane[0].dot(x) * plane[0] + plane[1].dot(x) * plane[1];
}

void requireFrames(const SurfaceMesh& surface) {
  if (!surface.hasFrames()) throw Error(ErrorKind::MissingFrames, "boundary surface has no frames");
}

} // namespace

const char* bundleName(BundleKind kind) {
  switch (kind) {
  case BundleKind::NuX: return "nu_x";
  case BundleKind::MuX: return "mu_x";
  case BundleKind::Tangent: return "tangent";
  }
  return "?";
}

const char* verdictName(Verdict v) { return v == Verdict::SmoothModuli ? "SmoothModuli" : "Inconclusive"; }

const PlaneField& BoundaryBundles::planes(BundleKind kind) const {
  switch (kind) {
  case BundleKind::NuX: return nu;
  case BundleKind::MuX: return mu;
  case BundleKind::Tangent: return tangent;
  }
  return nu;
}

BoundaryBundles decomposeBoundaryBundles(const SurfaceMesh& surface, const Vec7& e) {
  requireFrames(surface);
  if (std::abs(e.norm() - 1.0) > 1e-10 || e.head<3>().norm() > 1e-10)
    throw Error(ErrorKind::InvalidNormal, "e must be a unit vector orthogonal to the tangent space R^3");
  BoundaryBundles out;
  out.e = e;
  const int n = surface.vertexCount();
  out.nu.resize(n);
  out.mu.resize(n);
  out.tangent.resize(n);
  for (int i = 0; i < n; ++i) {
    const Vec7 nn = lift(surface.normal[i]);
    const Vec7 v = lift(surface.v[i]);
    const Vec7 ve = cross(v, e);
    out.nu[i] = {e, cross(nn, e)};
    out.mu[i] = {ve, cross(nn, ve)};
    out.tangent[i] = {v, cross(nn, v)};
    for (const auto* field : {&out.nu, &out.mu, &out.tangent}) {
      const auto& p = (*field)[i];
      out.maxInvarianceError = std::max(out.maxInvarianceError, (cross(nn, p[1]) + p[0]).norm());
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        out.maxOrthogonalityError = std::max(out.maxOrthogonalityError, std::abs(out.nu[i][a].dot(out.mu[i][b])));
  }
  return out;
}

BoundaryBundles decomposeBoundaryBundles(const Domain& domain, const Vec7& e) {
  if (!domain.boundary) throw Error(ErrorKind::NonClosedSurface, "domain has no boundary surface");
  for (int i = 0; i < domain.nodeCount(); ++i)
    for (int a = 0; a < 3; ++a)
      if (std::abs(domain.tangentFrame[i][a].dot(e)) > 1e-10)
        throw Error(ErrorKind::InvalidNormal, "e is not orthogonal to the tangent space at node " + std::to_string(i));
  return decomposeBoundaryBundles(*domain.boundary, e);
}

BoundaryCondition makeBoundaryCondition(const Domain& domain, const BoundaryBundles& bundles, BundleKind kind) {
  if (!domain.boundary) throw Error(ErrorKind::NonClosedSurface, "domain has no boundary surface");
  const SurfaceMesh& surf = *domain.boundary;
  const PlaneField& planes = bundles.planes(kind);
  BoundaryCondition bc;
  bc.name = bundleName(kind);
  for (int b = 0; b < surf.vertexCount(); ++b) {
    const int node = surf.volumeNode[b];
    Eigen::Matrix<double, 4, 2> basis;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 4; ++k) basis(k, j) = planes[b][j].dot(domain.normalFrame[node][k]);
    bc.nodes.push_back(node);
    bc.basis.push_back(basis);
  }
  return bc;
}

double DLField::minEigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : eigenvalues) m = std::min(m, e(0));
  return m;
}

int DLField::argMinEigenvalue() const {
  int arg = -1;
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues[i](0) < m) {
      m = eigenvalues[i](0);
      arg = static_cast<int>(i);
    }
  return arg;
}

DLField assembleDL(const SurfaceMesh& surface, const BoundaryBundles& bundles, BundleKind kind, double frameAngle) {
  requireFrames(surface);
  if (!surface.hasCurvature()) throw Error(ErrorKind::MissingCurvatureData, "boundary curvatures are missing");
  const SurfaceGradient grad(surface);
  const PlaneField& planes = bundles.planes(kind);
  const int n = surface.vertexCount();
  DLField out;
  out.raw.resize(n);
  out.matrix.resize(n);
  out.eigenvalues.resize(n);
  out.trace.resize(n);
  out.asymmetry.resize(n);

  const double c = std::cos(frameAngle), s = std::sin(frameAngle);
  const double cw = std::cos(frameAngle + kPi / 2), sw = std::sin(frameAngle + kPi / 2);
  for (int i = 0; i < n; ++i) {
    const Vec7 nn = lift(surface.normal[i]);
    const Vec7 v = lift(c * surface.v[i] + s * surface.w[i]);
    const Vec7 w = cross(nn, v);
    std::array<Vec7, 2> f = planes[i];
    if (kind == BundleKind::MuX) {
      f[0] = cross(v, bundles.e);
      f[1] = cross(nn, f[0]);
    } else if (kind == BundleKind::Tangent) {
      f = {v, w};
    }
    const Stencil& st = grad.stencil(i);
    Eigen::Matrix2d M;
    for (int a = 0; a < 2; ++a) {
      const Vec7 gi = projectOnto(planes[i], f[a]);
      Vec7 dv = Vec7::Zero(), dw = Vec7::Zero();
      for (std::size_t k = 0; k < st.nodes.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const Vec7 diff = projectOnto(planes[st.nodes[k]], f[a]) - gi;
        dv += (c * st.coeff(0, kk) + s * st.coeff(1, kk)) * diff;
        dw += (cw * st.coeff(0, kk) + sw * st.coeff(1, kk)) * diff;
      }
      const Vec7 x = cross(v, dw) - cross(w, dv);
      for (int b = 0; b < 2; ++b) M(b, a) = f[b].dot(x);
    }
    out.raw[i] = M;
    out.asymmetry[i] = std::abs(M(0, 1) - M(1, 0));
    out.maxAsymmetry = std::max(out.maxAsymmetry, out.asymmetry[i]);
    const Eigen::Matrix2d sym = 0.5 * (M + M.transpose());
    out.matrix[i] = sym;
    out.trace[i] = sym.trace();
    out.eigenvalues[i] = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(sym, Eigen::EigenvaluesOnly).eigenvalues();
  }
  return out;
}

std::vector<Vec7> applyDL(const SurfaceMesh& surface, const BoundaryBundles& bundles, BundleKind kind,
                          const std::vector<Vec7>& section) {
  requireFrames(surface);
  const SurfaceGradient grad(surface);
  const int n = surface.vertexCount();
  Eigen::MatrixXd values(n, 7);
  for (int i = 0; i < n; ++i) values.row(i) = section[i].transpose();
  const Eigen::MatrixXd dv = grad.differentiate(0, values);
  const Eigen::MatrixXd dw = grad.differentiate(1, values);
  const PlaneField& planes = bundles.planes(kind);
  std::vector<Vec7> out(n);
  for (int i = 0; i < n; ++i) {
    const Vec7 x = cross(lift(surface.v[i]), dw.row(i).transpose()) - cross(lift(surface.w[i]), dv.row(i).transpose());
    out[i] = projectOnto(planes[i], x);
  }
  return out;
}

ChernResult chernNumber(const SurfaceMesh& surface, const PlaneField& planes) {
  auto transport = [&](int p, int q) {
    return std::complex<double>(planes[p][0].dot(planes[q][0]), planes[p][0].dot(planes[q][1]));
  };
  double total = 0.0;
  for (const auto& t : surface.triangles) {
    // Stored triangles are counter-clockwise about the outer normal; J = n x uses the
    // inner normal, so its orientation traverses them backwards.
    const int a = t[0], b = t[2], c = t[1];
    total += std::arg(transport(a, b) * transport(b, c) * transport(c, a));
  }
  ChernResult out;
  out.raw = total / (2 * kPi);
  out.c1 = static_cast<int>(std::lround(out.raw));
  out.residual = std::abs(out.raw - out.c1);
  if (!(out.residual < 0.1)) {
    throw Error(ErrorKind::HolonomyResidualTooLarge,
                "holonomy sum " + std::to_string(out.raw) + " is not within 0.1 of an integer");
  }
  return out;
}

IndexResult indexFormula(const SurfaceMesh& surface, const BoundaryBundles& bundles, bool productModel) {
  IndexResult out;
  out.productModel = productModel;
  out.genus = eulerGenus(surface);
  out.chern = chernNumber(surface, productModel ? bundles.mu : bundles.nu);
  out.index = out.chern.c1 + 1 - out.genus;
  return out;
}

RigidityReport rigidityReport(const DLField& dlMu, const SimonsField& simons, int index) {
  RigidityReport r;
  r.minDLMu = dlMu.minEigenvalue();
  r.minDLMuVertex = dlMu.argMinEigenvalue();
  r.minNormalEigenvalue = simons.globalMinNormalEigenvalue();
  r.minNormalNode = simons.argMinNormalEigenvalue();
  r.flatBranch = simons.flat;
  r.expectedDimension = index;
  const bool boundaryOk = r.minDLMu > 0.0;
  const bool interiorOk = r.flatBranch || r.minNormalEigenvalue >= -1e-10;
  if (boundaryOk && interiorOk) {
    r.verdict = Verdict::SmoothModuli;
    r.reason = r.flatBranch ? "D_mu positive on the boundary; R_nu vanishes (flat, totally geodesic)"
                            : "D_mu positive on the boundary; R_nu nonnegative";
  } else {
    r.verdict = Verdict::Inconclusive;
    if (!boundaryOk)
      r.reason = "D_mu has eigenvalue " + std::to_string(r.minDLMu) + " at boundary vertex " +
                 std::to_string(r.minDLMuVertex);
    else
      r.reason = "R_nu has eigenvalue " + std::to_string(r.minNormalEigenvalue) + " at node " +
                 std::to_string(r.minNormalNode);
  }
  return r;
}

BochnerTerms boundaryBochner(const AssembledOperator& op, const SimonsField* simons, const NormalField& psi,
                             const BoundaryBundles* bundles, const BundleKind* kind) {
  const Domain& domain = *op.domain;
  BochnerTerms out;
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor>> rows(psi.data(), psi.size() / 4, 4);
  const Eigen::MatrixXd r = rows;
  for (int a = 0; a < 3; ++a) {
    const Eigen::MatrixXd d = op.gradient->differentiate(a, r);
    for (Eigen::Index i = 0; i < d.rows(); ++i) out.gradient += op.weights(i) * d.row(i).squaredNorm();
  }
  for (int i = 0; i < domain.nodeCount(); ++i) {
    const Eigen::Vector4d p = psi.segment<4>(4 * i);
    out.normSquared += op.weights(i) * p.squaredNorm();
    if (simons) out.curvature += op.weights(i) * p.dot(simons->normalOperator[i] * p);
  }
  if (domain.boundary) {
    const SurfaceMesh& surf = *domain.boundary;
    const auto ambient = toAmbient(domain, psi);
    const int n = surf.vertexCount();
    Eigen::MatrixXd values(n, 7);
    for (int b = 0; b < n; ++b) values.row(b) = ambient[surf.volumeNode[b]].transpose();
    const SurfaceGradient grad(surf);
    const Eigen::MatrixXd dv = grad.differentiate(0, values);
    const Eigen::MatrixXd dw = grad.differentiate(1, values);
    for (int b = 0; b < n; ++b) {
      Vec7 x = cross(lift(surf.v[b]), dw.row(b).transpose()) - cross(lift(surf.w[b]), dv.row(b).transpose());
      if (bundles && kind) x = projectOnto(bundles->planes(*kind)[b], x);
      out.boundary += surf.area[b] * x.dot(values.row(b).transpose());
    }
  }
  return out;
}

Eigen::MatrixXd linearHarmonicCoefficients() {
  Eigen::Matrix<double, 4, 12> S;
  for (int k = 0; k < 3; ++k) S.block<4, 4>(0, 4 * k) = tangentActionOnNormal(k);
  const Eigen::FullPivLU<Eigen::MatrixXd> lu{Eigen::MatrixXd(S)};
  const Eigen::MatrixXd kernel = lu.kernel();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
  return qr.householderQ() * Eigen::MatrixXd::Identity(kernel.rows(), kernel.cols());
}

NormalField linearField(const Domain& domain, const Eigen::VectorXd& stacked) {
  NormalField psi(4 * domain.nodeCount());
  for (int i = 0; i < domain.nodeCount(); ++i) {
    Eigen::Vector4d value = Eigen::Vector4d::Zero();
    for (int k = 0; k < 3; ++k) value += domain.nodes[i](k) * stacked.segment<4>(4 * k);
    psi.segment<4>(4 * i) = value;
  }
  return psi;
}

} // namespace g2cal
