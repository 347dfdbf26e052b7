#include "ddm/inelastic.hpp"

#include <algorithm>
#include <string>

#include "ddm/errors.hpp"

namespace ddm {

PartitionedData::PartitionedData(const LabeledDataSet& ds, const PhaseMetric& metric)
    : elastic_(DataView::subset(ds, Subset::elastic, metric)), inelastic_(DataView::subset(ds, Subset::inelastic, metric))
{
}

std::vector<const PartitionedData*> uniformData(const PartitionedData& data, std::size_t numPoints)
{
  return std::vector<const PartitionedData*>(numPoints, &data);
}

namespace {

const DataView& requireView(const PartitionedData& data, Subset s, std::size_t point)
{
  const DataView& v = data.view(s);
  if (v.empty()) {
    throw EmptyDataError("material point " + std::to_string(point) + " requires the " + std::string(subsetName(s)) +
                         " subset, which is empty; use a larger dataset that covers " + std::string(subsetName(s)) +
                         " states");
  }
  return v;
}

}  // namespace

std::vector<PointHistory> initialHistories(std::span<const PartitionedData* const> data, double sigmaY0)
{
  if (!(sigmaY0 > 0.0)) throw ParameterError("initial yield stress must be positive");
  std::vector<PointHistory> out(data.size());
  for (std::size_t e = 0; e < data.size(); ++e) {
    const DataView& v = requireView(*data[e], Subset::elastic, e);
    out[e] = {sigmaY0, Subset::elastic, v.nearest(MechState{}).index};
  }
  return out;
}

std::vector<PointHistory> applyTransition(std::span<const PartitionedData* const> data,
                                          std::span<const PointHistory> histories, const DDSolution& solution,
                                          const TransitionOptions& options)
{
  if (data.size() != histories.size() || solution.states.size() != histories.size()) {
    throw ParameterError("one dataset, history and state per material point");
  }
  std::vector<PointHistory> out(histories.begin(), histories.end());
  for (std::size_t e = 0; e < out.size(); ++e) {
    PointHistory& h = out[e];
    const MechState& z = solution.states[e];
    const double sigmaCom = vonMisesStress(z.stress);
    if (sigmaCom < h.yieldStress) {
      h.currentSubset = Subset::elastic;
    } else {
      h.currentSubset = Subset::inelastic;
      h.yieldStress = options.clampYieldStress ? std::max(sigmaCom, h.yieldStress) : sigmaCom;
    }
    h.assignedIndex = requireView(*data[e], h.currentSubset, e).nearest(z).index;
  }
  return out;
}

TransitionResult transitionStep(const FemModel& model, std::span<const PartitionedData* const> data,
                                std::span<const PointHistory> histories, const Vector& load,
                                const PhaseMetric& metric, const TransitionOptions& options)
{
  const std::size_t m = model.numPoints();
  if (data.size() != m || histories.size() != m) throw ParameterError("one dataset and history per material point");

  std::vector<const DataView*> views(m);
  std::vector<std::size_t> initial(m);
  for (std::size_t e = 0; e < m; ++e) {
    views[e] = &requireView(*data[e], histories[e].currentSubset, e);
    initial[e] = histories[e].assignedIndex;
  }

  DDSolution solution = ddSolveStep(model, load, views, std::move(initial), metric, options.solver);
  std::vector<PointHistory> next = applyTransition(data, histories, solution, options);
  return {std::move(solution), std::move(next)};
}

LoadProgramResult runLoadProgram(const FemModel& model, std::span<const PartitionedData* const> data,
                                 const LoadSchedule& schedule, const PhaseMetric& metric, double sigmaY0,
                                 const TransitionOptions& options)
{
  if (schedule.size() == 0) throw ParameterError("load schedule is empty");
  LoadProgramResult out;
  out.steps.reserve(schedule.size());
  out.histories.reserve(schedule.size());
  std::vector<PointHistory> histories = initialHistories(data, sigmaY0);
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    TransitionResult r = transitionStep(model, data, histories, schedule.load(k), metric, options);
    histories = r.histories;
    out.steps.push_back(std::move(r.solution));
    out.histories.push_back(std::move(r.histories));
  }
  return out;
}

}  // namespace ddm
