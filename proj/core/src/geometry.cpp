#include "g2cal/geometry.hpp"

#include "g2cal/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace g2cal {

namespace {

// n x 7 matrix holding one frame vector per node.
Eigen::MatrixXd frameField(const Domain& domain, bool normal, int k) {
  Eigen::MatrixXd out(domain.nodeCount(), 7);
  for (int i = 0; i < domain.nodeCount(); ++i)
    out.row(i) = (normal ? domain.normalFrame[i][k] : domain.tangentFrame[i][k]).transpose();
  return out;
}

} // namespace

double SimonsField::globalMinNormalEigenvalue() const {
  return minNormalEigenvalue.empty() ? 0.0 : *std::min_element(minNormalEigenvalue.begin(), minNormalEigenvalue.end());
}

int SimonsField::argMinNormalEigenvalue() const {
  if (minNormalEigenvalue.empty()) return -1;
  return static_cast<int>(std::min_element(minNormalEigenvalue.begin(), minNormalEigenvalue.end()) -
                          minNormalEigenvalue.begin());
}

ShapeField secondFundamentalForm(const Domain& domain) {
  if (!domain.hasFrames()) throw Error(ErrorKind::MissingFrames, "second fundamental form needs frames");
  const NodalGradient grad(domain);
  return secondFundamentalForm(domain, grad);
}

ShapeField secondFundamentalForm(const Domain& domain, const NodalGradient& grad) {
  if (!domain.hasFrames()) throw Error(ErrorKind::MissingFrames, "second fundamental form needs frames");
  const int n = domain.nodeCount();
  ShapeField out;
  out.A.resize(n);
  for (int k = 0; k < 4; ++k) {
    const Eigen::MatrixXd eta = frameField(domain, true, k);
    std::array<Eigen::MatrixXd, 3> d;
    for (int a = 0; a < 3; ++a) d[a] = grad.differentiate(a, eta);
    for (int i = 0; i < n; ++i) {
      Eigen::Matrix3d raw;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) raw(a, b) = -d[a].row(i).dot(domain.tangentFrame[i][b].transpose());
      out.maxAsymmetry = std::max(out.maxAsymmetry, (raw - raw.transpose()).cwiseAbs().maxCoeff());
      out.A[i][k] = 0.5 * (raw + raw.transpose());
    }
  }
  return out;
}

SimonsField simonsOperators(const Domain& domain, const ShapeField& shape) {
  const int n = domain.nodeCount();
  SimonsField out;
  out.ambient.assign(n, Mat4::Zero());
  out.shape.resize(n);
  out.normalOperator.resize(n);
  out.minNormalEigenvalue.resize(n);
  out.minShapeEigenvalue.resize(n);
  double maxAbs = 0.0;
  for (int i = 0; i < n; ++i) {
    Mat4 a;
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) a(k, l) = (shape.A[i][k] * shape.A[i][l]).trace();
    out.shape[i] = a;
    out.normalOperator[i] = out.ambient[i] - a;
    Eigen::SelfAdjointEigenSolver<Mat4> eigA(a, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Mat4> eigR(out.normalOperator[i], Eigen::EigenvaluesOnly);
    out.minShapeEigenvalue[i] = eigA.eigenvalues()(0);
    out.minNormalEigenvalue[i] = eigR.eigenvalues()(0);
    maxAbs = std::max(maxAbs, out.normalOperator[i].cwiseAbs().maxCoeff());
  }
  out.flat = maxAbs <= 1e-12;
  return out;
}

std::vector<Eigen::Vector4d> meanCurvatureVector(const Domain& domain, const NodalGradient& grad) {
  if (!domain.hasFrames()) throw Error(ErrorKind::MissingFrames, "mean curvature needs frames");
  const int n = domain.nodeCount();
  std::vector<Eigen::Vector4d> out(n, Eigen::Vector4d::Zero());
  for (int a = 0; a < 3; ++a) {
    const Eigen::MatrixXd da = grad.differentiate(a, frameField(domain, false, a));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 4; ++k) out[i](k) += da.row(i).dot(domain.normalFrame[i][k].transpose());
  }
  return out;
}

RicciCheck ricciEquationResidual(const Domain& domain, const NodalGradient& grad, const ShapeField& shape) {
  if (!domain.hasFrames()) throw Error(ErrorKind::MissingFrames, "Ricci check needs frames");
  const int n = domain.nodeCount();

  // Connection forms along the tangent frame: omega[a][i](k, l) = <d_a eta_k, eta_l>.
  std::array<std::vector<Mat4>, 3> omega;
  for (auto& o : omega) o.assign(n, Mat4::Zero());
  for (int k = 0; k < 4; ++k) {
    const Eigen::MatrixXd eta = frameField(domain, true, k);
    for (int a = 0; a < 3; ++a) {
      const Eigen::MatrixXd d = grad.differentiate(a, eta);
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < 4; ++l) omega[a][i](k, l) = d.row(i).dot(domain.normalFrame[i][l].transpose());
    }
  }

  // Ambient components Omega_c = sum_a omega_a e_a(c), one n x 16 block per coordinate.
  std::array<Eigen::MatrixXd, 7> ambient;
  for (int c = 0; c < 7; ++c) {
    ambient[c].setZero(n, 16);
    for (int i = 0; i < n; ++i) {
      Mat4 m = Mat4::Zero();
      for (int a = 0; a < 3; ++a) m += omega[a][i] * domain.tangentFrame[i][a](c);
      ambient[c].row(i) = Eigen::Map<const Eigen::RowVectorXd>(m.data(), 16);
    }
  }
  std::array<std::array<Eigen::MatrixXd, 7>, 3> dAmbient;
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 7; ++c) dAmbient[a][c] = grad.differentiate(a, ambient[c]);

  RicciCheck out;
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < 3; ++a) out.connectionScale = std::max(out.connectionScale, omega[a][i].cwiseAbs().maxCoeff());
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        Eigen::Matrix<double, 1, 16> flat = Eigen::Matrix<double, 1, 16>::Zero();
        for (int c = 0; c < 7; ++c) {
          flat += dAmbient[a][c].row(i) * domain.tangentFrame[i][b](c);
          flat -= dAmbient[b][c].row(i) * domain.tangentFrame[i][a](c);
        }
        const Mat4 F = Eigen::Map<const Mat4>(flat.data()) + omega[b][i] * omega[a][i] - omega[a][i] * omega[b][i];
        for (int k = 0; k < 4; ++k)
          for (int m = 0; m < 4; ++m) {
            const Eigen::Matrix3d comm = shape.A[i][k] * shape.A[i][m] - shape.A[i][m] * shape.A[i][k];
            out.maxResidual = std::max(out.maxResidual, std::abs(F(k, m) - comm(b, a)));
          }
      }
  }
  return out;
}

} // namespace g2cal
