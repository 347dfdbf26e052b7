#include "ddm/dd_solver.hpp"

#include <set>

#include "ddm/errors.hpp"

namespace ddm {

double defaultTolerance(const FemModel& model, const LabeledDataSet& ds, const PhaseMetric& metric)
{
  const double eps = ds.maxAbsStrain();
  return 1e-8 * static_cast<double>(model.numPoints()) * 0.5 * metric.modulus() * eps * eps;
}

DDSystem assembleDDSystem(const FemModel& model, std::span<const DataPoint> assigned, const Vector& load)
{
  if (assigned.size() != model.numPoints()) throw ParameterError("one data point per material point required");
  std::vector<TangentMatrix> tangents;
  std::vector<SymTensor> offsets;  // sigmaHat - C epsHat
  tangents.reserve(assigned.size());
  offsets.reserve(assigned.size());
  for (const DataPoint& p : assigned) {
    tangents.push_back(p.tangent.symmetrized());
    offsets.push_back(p.stress - tangents.back() * p.strain);
  }
  CondensedStiffness k = assembleStiffness(model, tangents);
  const Vector offsetForce = model.internalForce(offsets);
  Vector rhs = model.restrictToFree(Vector(load - offsetForce)) + k.prescribedRhs;
  return {std::move(k.matrix), std::move(rhs)};
}

std::vector<const DataView*> uniformViews(const DataView& view, std::size_t numPoints)
{
  return std::vector<const DataView*>(numPoints, &view);
}

std::vector<std::size_t> zeroStateAssignment(std::span<const DataView* const> views)
{
  std::vector<std::size_t> out;
  out.reserve(views.size());
  for (const DataView* v : views) out.push_back(v->nearest(MechState{}).index);
  return out;
}

double equilibriumResidual(const FemModel& model, std::span<const MechState> states, const Vector& load)
{
  std::vector<SymTensor> stresses;
  stresses.reserve(states.size());
  for (const auto& s : states) stresses.push_back(s.stress);
  return model.restrictToFree(Vector(model.internalForce(stresses) - load)).norm();
}

namespace {

struct Iterate
{
  Vector displacement;
  std::vector<MechState> states;
};

void checkViews(const FemModel& model, std::span<const DataView* const> views, const std::vector<std::size_t>& initial)
{
  if (views.size() != model.numPoints()) throw ParameterError("one data view per material point required");
  if (initial.size() != model.numPoints()) throw ParameterError("initial assignment has wrong length");
  for (std::size_t e = 0; e < views.size(); ++e) {
    if (views[e] == nullptr || views[e]->empty()) {
      throw EmptyDataError("empty data view at material point " + std::to_string(e));
    }
    if (!views[e]->contains(initial[e])) {
      throw ParameterError("initial assignment at point " + std::to_string(e) + " is not in its data view");
    }
  }
}

/// Shared fixed-point loop; `solve` maps an assignment to compatible, equilibrated states.
template <class SolveFn>
DDSolution fixedPoint(const FemModel& model, std::span<const DataView* const> views, std::vector<std::size_t> assignment,
                      const PhaseMetric&, const SolverOptions& options, SolveFn solve)
{
  checkViews(model, views, assignment);
  const std::size_t m = model.numPoints();
  std::vector<double> weights(m);
  for (std::size_t e = 0; e < m; ++e) weights[e] = model.point(e).weight;

  std::set<std::vector<std::size_t>> seen{assignment};
  DDSolution best;
  bool haveBest = false;
  DDSolution current;

  for (int k = 1; k <= options.maxIter; ++k) {
    Iterate it = solve(assignment);

    std::vector<std::size_t> next(m);
    double distance = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
      const NearestResult r = views[e]->nearest(it.states[e]);
      next[e] = r.index;
      distance += weights[e] * r.distance;
    }

    current = DDSolution{std::move(it.displacement), std::move(it.states), next, k, distance, false};
    if (distance <= options.tol || next == assignment) return current;
    if (!haveBest || current.finalDistance < best.finalDistance) {
      best = current;
      haveBest = true;
    }
    if (!seen.insert(next).second) {
      best.iterations = k;
      best.cycleDetected = true;
      return best;
    }
    assignment = std::move(next);
  }
  throw NonConvergenceError("data-driven solver did not converge in " + std::to_string(options.maxIter) + " iterations",
                            std::move(current));
}

std::vector<DataPoint> gather(std::span<const DataView* const> views, const std::vector<std::size_t>& assignment)
{
  std::vector<DataPoint> out;
  out.reserve(assignment.size());
  for (std::size_t e = 0; e < assignment.size(); ++e) out.push_back(views[e]->dataset()[assignment[e]]);
  return out;
}

}  // namespace

DDSolution ddSolveStep(const FemModel& model, const Vector& load, std::span<const DataView* const> views,
                       std::vector<std::size_t> initial, const PhaseMetric& metric, const SolverOptions& options)
{
  CondensedSolver solver;
  return fixedPoint(model, views, std::move(initial), metric, options, [&](const std::vector<std::size_t>& assignment) {
    const std::vector<DataPoint> data = gather(views, assignment);
    const DDSystem sys = assembleDDSystem(model, data, load);
    solver.factorize(model, sys.matrix);
    Iterate it{model.expand(solver.solve(sys.rhs)), {}};
    it.states.reserve(data.size());
    for (std::size_t e = 0; e < data.size(); ++e) {
      const SymTensor strain = model.strain(e, it.displacement);
      const TangentMatrix c = data[e].tangent.symmetrized();
      it.states.push_back({strain, data[e].stress + c * (strain - data[e].strain)});
    }
    return it;
  });
}

DDSolution classicalDDSolve(const FemModel& model, const Vector& load, std::span<const DataView* const> views,
                            std::vector<std::size_t> initial, const PhaseMetric& metric, const SolverOptions& options)
{
  const double modulus = metric.modulus();
  const std::vector<TangentMatrix> metricTangents(model.numPoints(), TangentMatrix(Mat4(modulus * Mat4::Identity())));
  const CondensedStiffness k = assembleStiffness(model, metricTangents);
  CondensedSolver solver;
  solver.factorize(model, k.matrix);

  return fixedPoint(model, views, std::move(initial), metric, options, [&](const std::vector<std::size_t>& assignment) {
    const std::vector<DataPoint> data = gather(views, assignment);
    std::vector<SymTensor> scaledStrain;
    std::vector<SymTensor> dataStress;
    scaledStrain.reserve(data.size());
    dataStress.reserve(data.size());
    for (const DataPoint& p : data) {
      scaledStrain.push_back(modulus * p.strain);
      dataStress.push_back(p.stress);
    }
    // Displacement field closest to the data strains, and the multiplier restoring equilibrium.
    const Vector uFree = solver.solve(Vector(model.restrictToFree(model.internalForce(scaledStrain)) + k.prescribedRhs));
    const Vector etaFree = solver.solve(model.restrictToFree(Vector(load - model.internalForce(dataStress))));
    Vector eta = Vector::Zero(static_cast<Eigen::Index>(model.numDofs()));
    for (std::size_t i = 0; i < model.numFree(); ++i) {
      eta[static_cast<Eigen::Index>(model.freeDofs()[i])] = etaFree[static_cast<Eigen::Index>(i)];
    }

    Iterate it{model.expand(uFree), {}};
    it.states.reserve(data.size());
    for (std::size_t e = 0; e < data.size(); ++e) {
      it.states.push_back({model.strain(e, it.displacement), data[e].stress + modulus * model.strain(e, eta)});
    }
    return it;
  });
}

}  // namespace ddm
