#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ddm/mesh.hpp"
#include "ddm/tensor.hpp"

namespace ddm {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using BMatrix = Eigen::Matrix<double, 4, 12>;
using ElementDofs = std::array<std::size_t, 12>;

/// Values and reference gradients of the quadratic triangle at (xi, eta).
struct Tri6Shape
{
  std::array<double, 6> values;
  std::array<Eigen::Vector2d, 6> gradients;  // d/dxi, d/deta
};

Tri6Shape shapeTri6(double xi, double eta);

struct QuadraturePoint
{
  double xi;
  double eta;
  double weight;
};

/// Degree-2 exact rule on the reference triangle (weights sum to 1/2).
const std::array<QuadraturePoint, 3>& triangleGaussRule();

/// One integration point: w_e and B_e, which maps element dofs to Mandel strain.
struct MaterialPoint
{
  std::size_t element;
  int localPoint;
  Point2 position;
  double weight;
  BMatrix B;
};

enum class DofComponent { x, y, both };

struct DirichletSpec
{
  std::string edgeTag;
  DofComponent component = DofComponent::both;
  double value = 0.0;
};

struct DirichletCondition
{
  std::size_t dof;
  double value;
};

/**
 * Discretized plane-strain problem at unit thickness. Points are ordered
 * element-major; dofs are (u_x, u_y) interleaved per node. Immutable after
 * construction.
 */
class FemModel
{
 public:
  /// Throws JacobianError naming the first element with det J <= 0.
  FemModel(Mesh mesh, const std::vector<DirichletSpec>& bcs);

  const Mesh& mesh() const { return mesh_; }
  std::size_t numDofs() const { return 2 * mesh_.numNodes(); }
  std::size_t numPoints() const { return points_.size(); }
  const std::vector<MaterialPoint>& points() const { return points_; }
  const MaterialPoint& point(std::size_t e) const { return points_[e]; }
  const ElementDofs& elementDofs(std::size_t element) const { return elementDofs_[element]; }
  const ElementDofs& pointDofs(std::size_t e) const { return elementDofs_[points_[e].element]; }

  const std::vector<DirichletCondition>& dirichlet() const { return dirichlet_; }
  /// Free dof -> position in the condensed system, or -1 when prescribed.
  const std::vector<long>& freeIndex() const { return freeIndex_; }
  const std::vector<std::size_t>& freeDofs() const { return freeDofs_; }
  std::size_t numFree() const { return freeDofs_.size(); }

  /// B_e u for a full displacement vector.
  SymTensor strain(std::size_t e, const Vector& u) const;
  std::vector<SymTensor> strains(const Vector& u) const;
  /// sum_e w_e B_e^T sigma_e
  Vector internalForce(std::span<const SymTensor> stresses) const;
  double totalWeight() const;

  /// Full vector with the prescribed values set and free entries taken from `freeValues`.
  Vector expand(const Vector& freeValues) const;
  Vector restrictToFree(const Vector& full) const;
  /// Prescribed values scattered into a full vector (free entries zero).
  Vector prescribedVector() const;

 private:
  Mesh mesh_;
  std::vector<MaterialPoint> points_;
  std::vector<ElementDofs> elementDofs_;
  std::vector<DirichletCondition> dirichlet_;
  std::vector<long> freeIndex_;
  std::vector<std::size_t> freeDofs_;
};

FemModel buildFemModel(Mesh mesh, const std::vector<DirichletSpec>& bcs);

/// Consistent nodal forces for a constant pressure p acting against the outward normal of the tagged edges.
Vector pressureLoad(const FemModel& model, const std::string& edgeTag, double pressure);
/// Consistent nodal forces for a constant traction vector on the tagged edges.
Vector tractionLoad(const FemModel& model, const std::string& edgeTag, const Eigen::Vector2d& traction);

/// Proportional loading: step k applies factors[k] * unitLoad.
struct LoadSchedule
{
  Vector unitLoad;
  std::vector<double> factors;

  std::size_t size() const { return factors.size(); }
  Vector load(std::size_t step) const { return factors.at(step) * unitLoad; }
  /// Largest |f_k| over the schedule.
  double maxLoadNorm() const;
};

/**
 * Assembles sum_e w_e B_e^T C_e B_e restricted to the free dofs, and the
 * coupling term -K_fp u_p that moves prescribed displacements to the
 * right-hand side. Element matrices are symmetrized before scattering and
 * only the lower triangle is stored.
 */
struct CondensedStiffness
{
  SparseMatrix matrix;
  Vector prescribedRhs;
};
CondensedStiffness assembleStiffness(const FemModel& model, std::span<const TangentMatrix> tangents);

/// Direct sparse LDL^T solver over the condensed free-dof system.
class CondensedSolver
{
 public:
  CondensedSolver();
  ~CondensedSolver();
  CondensedSolver(CondensedSolver&&) noexcept;
  CondensedSolver& operator=(CondensedSolver&&) noexcept;

  /// Throws SingularSystemError naming the global dof of a zero pivot.
  void factorize(const FemModel& model, const SparseMatrix& condensed);
  Vector solve(const Vector& rhsFree) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ddm
