#include "ddm/fem.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "ddm/errors.hpp"

namespace ddm {

Tri6Shape shapeTri6(double xi, double eta)
{
  const double l0 = 1.0 - xi - eta;
  const double l1 = xi;
  const double l2 = eta;
  Tri6Shape s;
  s.values = {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
              4.0 * l0 * l1,         4.0 * l1 * l2,         4.0 * l2 * l0};
  // dL0 = (-1,-1), dL1 = (1,0), dL2 = (0,1)
  s.gradients[0] = Eigen::Vector2d(-(4.0 * l0 - 1.0), -(4.0 * l0 - 1.0));
  s.gradients[1] = Eigen::Vector2d(4.0 * l1 - 1.0, 0.0);
  s.gradients[2] = Eigen::Vector2d(0.0, 4.0 * l2 - 1.0);
  s.gradients[3] = Eigen::Vector2d(4.0 * (l0 - l1), -4.0 * l1);
  s.gradients[4] = Eigen::Vector2d(4.0 * l2, 4.0 * l1);
  s.gradients[5] = Eigen::Vector2d(-4.0 * l2, 4.0 * (l0 - l2));
  return s;
}

const std::array<QuadraturePoint, 3>& triangleGaussRule()
{
  static const std::array<QuadraturePoint, 3> rule{{{1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0},
                                                    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                                                    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}}};
  return rule;
}

FemModel::FemModel(Mesh mesh, const std::vector<DirichletSpec>& bcs) : mesh_(std::move(mesh))
{
  const auto& rule = triangleGaussRule();
  points_.reserve(3 * mesh_.numElements());
  elementDofs_.reserve(mesh_.numElements());
  for (std::size_t el = 0; el < mesh_.numElements(); ++el) {
    const auto& conn = mesh_.elements[el];
    ElementDofs dofs{};
    for (int a = 0; a < 6; ++a) {
      dofs[2 * a] = 2 * conn[a];
      dofs[2 * a + 1] = 2 * conn[a] + 1;
    }
    elementDofs_.push_back(dofs);

    for (int q = 0; q < 3; ++q) {
      const Tri6Shape sh = shapeTri6(rule[q].xi, rule[q].eta);
      Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();
      Point2 x = Point2::Zero();
      for (int a = 0; a < 6; ++a) {
        const Point2& xa = mesh_.nodes[conn[a]];
        jac += xa * sh.gradients[a].transpose();
        x += sh.values[a] * xa;
      }
      const double det = jac.determinant();
      if (!(det > 0.0)) throw JacobianError(el, det);
      const Eigen::Matrix2d invT = jac.inverse().transpose();

      MaterialPoint mp{el, q, x, rule[q].weight * det, BMatrix::Zero()};
      constexpr double invSqrt2 = 1.0 / kSqrt2;
      for (int a = 0; a < 6; ++a) {
        const Eigen::Vector2d g = invT * sh.gradients[a];
        mp.B(0, 2 * a) = g.x();
        mp.B(1, 2 * a + 1) = g.y();
        mp.B(3, 2 * a) = invSqrt2 * g.y();
        mp.B(3, 2 * a + 1) = invSqrt2 * g.x();
      }
      points_.push_back(mp);
    }
  }

  std::vector<std::optional<double>> prescribed(numDofs());
  for (const DirichletSpec& bc : bcs) {
    for (const EdgeRef& edge : mesh_.edges(bc.edgeTag)) {
      for (std::size_t node : mesh_.edgeNodes(edge)) {
        if (bc.component != DofComponent::y) prescribed[2 * node] = bc.value;
        if (bc.component != DofComponent::x) prescribed[2 * node + 1] = bc.value;
      }
    }
  }
  freeIndex_.assign(numDofs(), -1);
  for (std::size_t d = 0; d < numDofs(); ++d) {
    if (prescribed[d]) {
      dirichlet_.push_back({d, *prescribed[d]});
    } else {
      freeIndex_[d] = static_cast<long>(freeDofs_.size());
      freeDofs_.push_back(d);
    }
  }
}

SymTensor FemModel::strain(std::size_t e, const Vector& u) const
{
  const auto& dofs = pointDofs(e);
  Eigen::Matrix<double, 12, 1> ue;
  for (int i = 0; i < 12; ++i) ue[i] = u[static_cast<Eigen::Index>(dofs[i])];
  return SymTensor(Vec4(points_[e].B * ue));
}

std::vector<SymTensor> FemModel::strains(const Vector& u) const
{
  std::vector<SymTensor> out;
  out.reserve(numPoints());
  for (std::size_t e = 0; e < numPoints(); ++e) out.push_back(strain(e, u));
  return out;
}

Vector FemModel::internalForce(std::span<const SymTensor> stresses) const
{
  Vector f = Vector::Zero(static_cast<Eigen::Index>(numDofs()));
  for (std::size_t e = 0; e < numPoints(); ++e) {
    const Eigen::Matrix<double, 12, 1> fe = points_[e].weight * (points_[e].B.transpose() * stresses[e].mandel());
    const auto& dofs = pointDofs(e);
    for (int i = 0; i < 12; ++i) f[static_cast<Eigen::Index>(dofs[i])] += fe[i];
  }
  return f;
}

double FemModel::totalWeight() const
{
  double sum = 0.0;
  for (const auto& p : points_) sum += p.weight;
  return sum;
}

Vector FemModel::expand(const Vector& freeValues) const
{
  Vector full = prescribedVector();
  for (std::size_t i = 0; i < freeDofs_.size(); ++i) {
    full[static_cast<Eigen::Index>(freeDofs_[i])] = freeValues[static_cast<Eigen::Index>(i)];
  }
  return full;
}

Vector FemModel::restrictToFree(const Vector& full) const
{
  Vector out(static_cast<Eigen::Index>(freeDofs_.size()));
  for (std::size_t i = 0; i < freeDofs_.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = full[static_cast<Eigen::Index>(freeDofs_[i])];
  }
  return out;
}

Vector FemModel::prescribedVector() const
{
  Vector full = Vector::Zero(static_cast<Eigen::Index>(numDofs()));
  for (const auto& d : dirichlet_) full[static_cast<Eigen::Index>(d.dof)] = d.value;
  return full;
}

double LoadSchedule::maxLoadNorm() const
{
  double m = 0.0;
  for (double f : factors) m = std::max(m, std::abs(f));
  return m * unitLoad.norm();
}

FemModel buildFemModel(Mesh mesh, const std::vector<DirichletSpec>& bcs) { return FemModel(std::move(mesh), bcs); }

namespace {

/// Integrates N_a * integrand(x, dx/ds) over each tagged quadratic edge.
template <class Integrand>
Vector edgeLoad(const FemModel& model, const std::string& edgeTag, Integrand integrand)
{
  const Mesh& mesh = model.mesh();
  Vector f = Vector::Zero(static_cast<Eigen::Index>(model.numDofs()));
  const double g = std::sqrt(3.0 / 5.0);
  const std::array<std::pair<double, double>, 3> rule{{{-g, 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {g, 5.0 / 9.0}}};
  for (const EdgeRef& edge : mesh.edges(edgeTag)) {
    const auto nodes = mesh.edgeNodes(edge);
    const Point2& xs = mesh.nodes[nodes[0]];
    const Point2& xe = mesh.nodes[nodes[1]];
    const Point2& xm = mesh.nodes[nodes[2]];
    for (const auto& [s, w] : rule) {
      const std::array<double, 3> n{0.5 * s * (s - 1.0), 0.5 * s * (s + 1.0), 1.0 - s * s};
      const Point2 tangent = (s - 0.5) * xs + (s + 0.5) * xe - 2.0 * s * xm;
      const Eigen::Vector2d load = integrand(tangent);
      for (int a = 0; a < 3; ++a) {
        f[static_cast<Eigen::Index>(2 * nodes[a])] += w * n[a] * load.x();
        f[static_cast<Eigen::Index>(2 * nodes[a] + 1)] += w * n[a] * load.y();
      }
    }
  }
  return f;
}

}  // namespace

Vector pressureLoad(const FemModel& model, const std::string& edgeTag, double pressure)
{
  // Counter-clockwise elements: outward normal times |dx/ds| is (t_y, -t_x).
  return edgeLoad(model, edgeTag,
                  [pressure](const Point2& t) { return Eigen::Vector2d(-pressure * t.y(), pressure * t.x()); });
}

Vector tractionLoad(const FemModel& model, const std::string& edgeTag, const Eigen::Vector2d& traction)
{
  return edgeLoad(model, edgeTag, [&traction](const Point2& t) { return Eigen::Vector2d(traction * t.norm()); });
}

CondensedStiffness assembleStiffness(const FemModel& model, std::span<const TangentMatrix> tangents)
{
  const Vector prescribed = model.prescribedVector();
  const auto& freeIndex = model.freeIndex();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(model.numPoints() * 78);
  Vector rhs = Vector::Zero(static_cast<Eigen::Index>(model.numFree()));

  for (std::size_t e = 0; e < model.numPoints(); ++e) {
    const MaterialPoint& mp = model.point(e);
    Eigen::Matrix<double, 12, 12> ke = mp.weight * (mp.B.transpose() * tangents[e].matrix() * mp.B);
    ke = 0.5 * (ke + ke.transpose()).eval();
    const auto& dofs = model.pointDofs(e);
    for (int i = 0; i < 12; ++i) {
      const long fi = freeIndex[dofs[i]];
      if (fi < 0) continue;
      for (int j = 0; j < 12; ++j) {
        const long fj = freeIndex[dofs[j]];
        if (fj >= 0) {
          if (fj <= fi) triplets.emplace_back(fi, fj, ke(i, j));
        } else {
          rhs[fi] -= ke(i, j) * prescribed[static_cast<Eigen::Index>(dofs[j])];
        }
      }
    }
  }
  SparseMatrix k(static_cast<Eigen::Index>(model.numFree()), static_cast<Eigen::Index>(model.numFree()));
  k.setFromTriplets(triplets.begin(), triplets.end());
  return {std::move(k), std::move(rhs)};
}

struct CondensedSolver::Impl
{
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower> ldlt;
  Eigen::Index analyzedSize = -1;
  Eigen::Index analyzedNonZeros = -1;
};

CondensedSolver::CondensedSolver() : impl_(std::make_unique<Impl>()) {}
CondensedSolver::~CondensedSolver() = default;
CondensedSolver::CondensedSolver(CondensedSolver&&) noexcept = default;
CondensedSolver& CondensedSolver::operator=(CondensedSolver&&) noexcept = default;

void CondensedSolver::factorize(const FemModel& model, const SparseMatrix& condensed)
{
  auto& ldlt = impl_->ldlt;
  if (impl_->analyzedSize != condensed.rows() || impl_->analyzedNonZeros != condensed.nonZeros()) {
    ldlt.analyzePattern(condensed);
    impl_->analyzedSize = condensed.rows();
    impl_->analyzedNonZeros = condensed.nonZeros();
  }
  ldlt.factorize(condensed);

  const Vector d = ldlt.vectorD();
  const double scale = d.size() > 0 ? d.cwiseAbs().maxCoeff() : 0.0;
  Eigen::Index bad = -1;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i]) || std::abs(d[i]) <= 1e-11 * scale) {
      bad = i;
      break;
    }
  }
  if (ldlt.info() != Eigen::Success && bad < 0) bad = d.size() - 1;
  if (bad >= 0) {
    // vectorD is in permuted order; P maps original -> permuted.
    const auto& perm = ldlt.permutationP().indices();
    Eigen::Index original = bad;
    for (Eigen::Index i = 0; i < perm.size(); ++i) {
      if (perm[i] == bad) {
        original = i;
        break;
      }
    }
    impl_->analyzedSize = -1;
    throw SingularSystemError(model.freeDofs()[static_cast<std::size_t>(original)]);
  }
}

Vector CondensedSolver::solve(const Vector& rhsFree) const { return impl_->ldlt.solve(rhsFree); }

}  // namespace ddm
