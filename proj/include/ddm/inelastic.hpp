#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ddm/dataset.hpp"
#include "ddm/dd_solver.hpp"
#include "ddm/fem.hpp"
#include "ddm/nn_index.hpp"

namespace ddm {

/// Elastic and inelastic views over one labeled dataset.
class PartitionedData
{
 public:
  PartitionedData(const LabeledDataSet& ds, const PhaseMetric& metric);

  const DataView& view(Subset s) const { return s == Subset::elastic ? elastic_ : inelastic_; }
  const LabeledDataSet& dataset() const { return elastic_.dataset(); }

 private:
  DataView elastic_;
  DataView inelastic_;
};

struct PointHistory
{
  double yieldStress = 0.0;
  Subset currentSubset = Subset::elastic;
  std::size_t assignedIndex = 0;
};

struct TransitionOptions
{
  SolverOptions solver;
  bool clampYieldStress = true;  // yieldStress := max(new, previous)
};

/// Virgin histories: elastic subset, yield stress sigmaY0, nearest elastic point to the zero state.
std::vector<PointHistory> initialHistories(std::span<const PartitionedData* const> data, double sigmaY0);

struct TransitionResult
{
  DDSolution solution;
  std::vector<PointHistory> histories;
};

/// The classification and re-assignment half of a transition, applied to a solved step.
std::vector<PointHistory> applyTransition(std::span<const PartitionedData* const> data,
                                          std::span<const PointHistory> histories, const DDSolution& solution,
                                          const TransitionOptions& options = {});

/**
 * One load step: solve on each point's current subset, then classify by
 * the comparison stress of the converged state (below the yield stress:
 * elastic; otherwise inelastic with the yield stress raised to it) and
 * re-assign the nearest point of the new subset for the next step.
 * Throws EmptyDataError when a point needs an empty subset.
 */
TransitionResult transitionStep(const FemModel& model, std::span<const PartitionedData* const> data,
                                std::span<const PointHistory> histories, const Vector& load,
                                const PhaseMetric& metric, const TransitionOptions& options = {});

struct LoadProgramResult
{
  std::vector<DDSolution> steps;
  std::vector<std::vector<PointHistory>> histories;  // after each step
};

/// Sequential transition steps over the schedule, starting from virgin histories.
LoadProgramResult runLoadProgram(const FemModel& model, std::span<const PartitionedData* const> data,
                                 const LoadSchedule& schedule, const PhaseMetric& metric, double sigmaY0,
                                 const TransitionOptions& options = {});

std::vector<const PartitionedData*> uniformData(const PartitionedData& data, std::size_t numPoints);

}  // namespace ddm
