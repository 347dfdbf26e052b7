#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ddm/dataset.hpp"
#include "ddm/fem.hpp"
#include "ddm/nn_index.hpp"

namespace ddm {

struct DDSolution
{
  Vector displacement;                 // full dof vector
  std::vector<MechState> states;       // modeling points z_e
  std::vector<std::size_t> assignment; // data index per material point
  int iterations = 0;                  // linear solves performed
  double finalDistance = 0.0;          // d(z, zHat) for the returned assignment
  bool cycleDetected = false;          // assignments oscillated; best iterate returned
};

/// Raised when maxIter is reached; carries the last iterate.
class NonConvergenceError : public std::runtime_error
{
 public:
  NonConvergenceError(const std::string& what, DDSolution last)
      : std::runtime_error(what), last_(std::move(last))
  {
  }
  const DDSolution& lastIterate() const { return last_; }

 private:
  DDSolution last_;
};

struct SolverOptions
{
  double tol = 0.0;  // on the global distance
  int maxIter = 100;
};

/// 1e-8 * m * (1/2 E (max |strain| in the dataset)^2).
double defaultTolerance(const FemModel& model, const LabeledDataSet& ds, const PhaseMetric& metric);

/// The condensed tangent-space system K u_f = rhs.
struct DDSystem
{
  SparseMatrix matrix;
  Vector rhs;
};

/**
 * K = sum_e w_e B_e^T C_e B_e and rhs = f - sum_e w_e B_e^T (sigmaHat_e - C_e epsHat_e),
 * condensed on the free dofs (lower triangle stored). Tangents are symmetrized.
 */
DDSystem assembleDDSystem(const FemModel& model, std::span<const DataPoint> assigned, const Vector& load);

/// Per-point views sharing one view object.
std::vector<const DataView*> uniformViews(const DataView& view, std::size_t numPoints);

/// Nearest data point to the zero state in each point's view.
std::vector<std::size_t> zeroStateAssignment(std::span<const DataView* const> views);

/**
 * Tangent-space data-driven solve for one load step: alternate the linear
 * solve (strain from B u, stress on the data point's tangent plane) with
 * nearest-point reassignment until the assignment repeats or the global
 * distance drops to tol. Throws NonConvergenceError after maxIter solves,
 * EmptyDataError for an empty view, SingularSystemError from the solve.
 */
DDSolution ddSolveStep(const FemModel& model, const Vector& load, std::span<const DataView* const> views,
                       std::vector<std::size_t> initial, const PhaseMetric& metric, const SolverOptions& options);

/**
 * Classical distance-minimizing scheme: for a fixed assignment, solve the
 * two-field stationarity system with the metric modulus as stiffness, then
 * reassign. Same termination rules as ddSolveStep.
 */
DDSolution classicalDDSolve(const FemModel& model, const Vector& load, std::span<const DataView* const> views,
                            std::vector<std::size_t> initial, const PhaseMetric& metric, const SolverOptions& options);

/// Equilibrium residual |sum w B^T sigma - f| on the free dofs.
double equilibriumResidual(const FemModel& model, std::span<const MechState> states, const Vector& load);

}  // namespace ddm
