#include "g2cal/gradients.hpp"

#include "g2cal/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace g2cal {

namespace {

// Monomials of degree 1..degree in `dim` variables, linear ones first.
Eigen::RowVectorXd monomials(const Eigen::VectorXd& p, int degree) {
  const int dim = static_cast<int>(p.size());
  std::vector<double> out;
  std::vector<std::pair<std::vector<int>, double>> level{{{}, 1.0}};
  for (int deg = 1; deg <= degree; ++deg) {
    std::vector<std::pair<std::vector<int>, double>> next;
    for (const auto& [idx, val] : level) {
      const int first = idx.empty() ? 0 : idx.back();
      for (int a = first; a < dim; ++a) {
        auto j = idx;
        j.push_back(a);
        next.emplace_back(j, val * p(a));
        out.push_back(val * p(a));
      }
    }
    level = std::move(next);
  }
  return Eigen::Map<Eigen::RowVectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

// Weighted least-squares fit of a polynomial in local coordinates; returns the rows of
// the pseudo-inverse that produce the first-order coefficients.
Stencil polynomialStencil(const std::vector<int>& nodes, const Eigen::MatrixXd& coords, double scale, int degree) {
  const int m = static_cast<int>(nodes.size());
  const int dim = static_cast<int>(coords.cols());
  const Eigen::Index cols = monomials(Eigen::VectorXd::Ones(dim), degree).size();
  Eigen::MatrixXd A(m, cols);
  Eigen::VectorXd weight(m);
  for (int r = 0; r < m; ++r) {
    const Eigen::VectorXd p = coords.row(r).transpose() / scale;
    weight(r) = 1.0 / p.squaredNorm();
    A.row(r) = monomials(p, degree) * weight(r);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Stencil st;
  st.nodes = nodes;
  st.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd pinv =
      svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  st.coeff = (pinv.topRows(dim) * weight.asDiagonal()) / scale;
  return st;
}

Eigen::MatrixXd differenceApply(const std::vector<Stencil>& stencils, int row, const Eigen::MatrixXd& values) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(values.rows(), values.cols());
  const int n = static_cast<int>(stencils.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const Stencil& st = stencils[i];
    for (std::size_t k = 0; k < st.nodes.size(); ++k)
      out.row(i) += st.coeff(row, static_cast<Eigen::Index>(k)) * (values.row(st.nodes[k]) - values.row(i));
  }
  return out;
}

SparseMatrix assemble(int n, const std::vector<Stencil>& stencils, int row) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < n; ++i) {
    const Stencil& st = stencils[i];
    double diag = 0.0;
    for (std::size_t k = 0; k < st.nodes.size(); ++k) {
      const double c = st.coeff(row, static_cast<Eigen::Index>(k));
      trips.emplace_back(i, st.nodes[k], c);
      diag -= c;
    }
    trips.emplace_back(i, i, diag);
  }
  SparseMatrix g(n, n);
  g.setFromTriplets(trips.begin(), trips.end());
  return g;
}

} // namespace

NodalGradient::NodalGradient(const Domain& domain) {
  if (!domain.hasFrames()) throw Error(ErrorKind::MissingFrames, "gradient assembly needs tangent frames");
  const int n = domain.nodeCount();

  if (domain.kind == DomainKind::PeriodicGrid) {
    const int N = domain.gridN;
    const double h = domain.spacing;
    stencils_.resize(n);
    for (int i3 = 0; i3 < N; ++i3)
      for (int i2 = 0; i2 < N; ++i2)
        for (int i1 = 0; i1 < N; ++i1) {
          Stencil& st = stencils_[domain.gridIndex(i1, i2, i3)];
          st.coeff = Eigen::MatrixXd::Zero(3, 6);
          for (int a = 0; a < 3; ++a) {
            std::array<int, 3> p{i1, i2, i3}, q{i1, i2, i3};
            p[a] += 1;
            q[a] -= 1;
            st.nodes.push_back(domain.gridIndex(p[0], p[1], p[2]));
            st.nodes.push_back(domain.gridIndex(q[0], q[1], q[2]));
            st.coeff(a, 2 * a) = 0.5 / h;
            st.coeff(a, 2 * a + 1) = -0.5 / h;
          }
          st.condition = 1.0;
        }
    for (int a = 0; a < 3; ++a) g_[a] = assemble(n, stencils_, a);
    return;
  }

  const auto adjacency = nodeNeighbors(domain);
  std::vector<Stencil>& stencils = stencils_;
  stencils.resize(n);
  std::vector<char> wide(n, 0);

#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < n; ++i) {
    const auto& frame = domain.tangentFrame[i];
    for (int rings = 1; rings <= 3; ++rings) {
      const auto nodes = rings == 1 ? adjacency[i] : ringNeighborhood(adjacency, i, rings);
      Eigen::MatrixXd coords(nodes.size(), 3);
      double scale = 0.0;
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const Vec7 d = domain.nodes[nodes[k]] - domain.nodes[i];
        for (int a = 0; a < 3; ++a) coords(static_cast<Eigen::Index>(k), a) = d.dot(frame[a]);
        scale += d.norm();
      }
      scale /= static_cast<double>(std::max<std::size_t>(nodes.size(), 1));
      if (nodes.size() < 12 && rings < 3) continue;
      Stencil st = polynomialStencil(nodes, coords, scale, 2);
      if (st.condition > 1e6 && rings < 3) continue;
      stencils[i] = std::move(st);
      wide[i] = rings > 1;
      break;
    }
  }
  for (char c : wide) widened_ += c;
  for (int a = 0; a < 3; ++a) g_[a] = assemble(n, stencils, a);
}

SurfaceGradient::SurfaceGradient(const SurfaceMesh& surface) {
  if (!surface.hasFrames()) throw Error(ErrorKind::MissingFrames, "surface gradient needs boundary frames");
  const int n = surface.vertexCount();
  const auto adjacency = vertexNeighbors(surface);
  std::vector<Stencil>& stencils = stencils_;
  stencils.resize(n);

#pragma omp parallel for schedule(dynamic, 64)
  for (int p = 0; p < n; ++p) {
    const auto nodes = ringNeighborhood(adjacency, p, 2);
    Eigen::MatrixXd coords(nodes.size(), 2);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const Vec3 d = surface.points[nodes[k]] - surface.points[p];
      coords(static_cast<Eigen::Index>(k), 0) = d.dot(surface.v[p]);
      coords(static_cast<Eigen::Index>(k), 1) = d.dot(surface.w[p]);
    }
    stencils[p] = polynomialStencil(nodes, coords, surface.meanEdge > 0 ? surface.meanEdge : 1.0, 3);
  }
  dv_ = assemble(n, stencils, 0);
  dw_ = assemble(n, stencils, 1);
}

Eigen::MatrixXd NodalGradient::differentiate(int a, const Eigen::MatrixXd& values) const {
  return differenceApply(stencils_, a, values);
}

Eigen::MatrixXd SurfaceGradient::differentiate(int which, const Eigen::MatrixXd& values) const {
  return differenceApply(stencils_, which, values);
}

Eigen::RowVectorXd SurfaceGradient::derivativeAt(int vertex, const Eigen::MatrixXd& values, double angle) const {
  const Stencil& st = stencils_[vertex];
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(values.cols());
  for (std::size_t k = 0; k < st.nodes.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    out += (c * st.coeff(0, kk) + s * st.coeff(1, kk)) * (values.row(st.nodes[k]) - values.row(vertex));
  }
  return out;
}

} // namespace g2cal
