#include "ddm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ddm/errors.hpp"

namespace ddm {

namespace {

struct PointResponse
{
  SymTensor stress;
  TangentMatrix tangent;
};

Vector expandHomogeneous(const FemModel& model, const Vector& freeValues)
{
  Vector full = Vector::Zero(static_cast<Eigen::Index>(model.numDofs()));
  for (std::size_t i = 0; i < model.numFree(); ++i) {
    full[static_cast<Eigen::Index>(model.freeDofs()[i])] = freeValues[static_cast<Eigen::Index>(i)];
  }
  return full;
}

/// Full Newton on the free dofs; `respond(e, strain)` evaluates the material at point e.
template <class Respond>
ReferenceStep newtonSolve(const FemModel& model, const Vector& load, const Vector& start, double loadScale,
                          const NewtonOptions& options, Respond respond)
{
  ReferenceStep step;
  step.displacement = model.expand(model.restrictToFree(start));
  const double scale = std::max(load.norm(), loadScale) > 0.0 ? std::max(load.norm(), loadScale) : 1.0;
  CondensedSolver solver;
  std::vector<SymTensor> stresses(model.numPoints());
  std::vector<TangentMatrix> tangents(model.numPoints());

  for (int it = 0;; ++it) {
    for (std::size_t e = 0; e < model.numPoints(); ++e) {
      PointResponse r = respond(e, model.strain(e, step.displacement));
      stresses[e] = r.stress;
      tangents[e] = r.tangent;
    }
    const Vector residual = model.restrictToFree(Vector(load - model.internalForce(stresses)));
    step.residual = residual.norm();
    step.newtonIterations = it;
    if (step.residual <= options.relTol * scale) break;
    if (it == options.maxIter) {
      throw NewtonConvergenceError("Newton iteration did not converge: residual " + std::to_string(step.residual) +
                                   " after " + std::to_string(it) + " iterations");
    }
    solver.factorize(model, assembleStiffness(model, tangents).matrix);
    step.displacement += expandHomogeneous(model, solver.solve(residual));
  }

  step.states.resize(model.numPoints());
  for (std::size_t e = 0; e < model.numPoints(); ++e) {
    step.states[e] = {model.strain(e, step.displacement), stresses[e]};
  }
  return step;
}

}  // namespace

ReferenceStep referenceSolveLinear(const FemModel& model, const TangentMatrix& elasticity, const Vector& load)
{
  const std::vector<TangentMatrix> tangents(model.numPoints(), elasticity);
  const CondensedStiffness k = assembleStiffness(model, tangents);
  CondensedSolver solver;
  solver.factorize(model, k.matrix);
  ReferenceStep step;
  step.displacement = model.expand(solver.solve(Vector(model.restrictToFree(load) + k.prescribedRhs)));
  step.states.reserve(model.numPoints());
  std::vector<SymTensor> stresses;
  for (std::size_t e = 0; e < model.numPoints(); ++e) {
    const SymTensor strain = model.strain(e, step.displacement);
    step.states.push_back({strain, elasticity * strain});
    stresses.push_back(step.states.back().stress);
  }
  step.residual = model.restrictToFree(Vector(load - model.internalForce(stresses))).norm();
  return step;
}

std::vector<ReferenceStep> referenceSolveNonlinear(const FemModel& model, const NonlinearElasticParams& p,
                                                   const LoadSchedule& schedule, const NewtonOptions& options)
{
  p.validate();
  std::vector<ReferenceStep> out;
  out.reserve(schedule.size());
  Vector u = model.prescribedVector();
  const double loadScale = schedule.maxLoadNorm();
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    out.push_back(newtonSolve(model, schedule.load(k), u, loadScale, options, [&p](std::size_t, const SymTensor& eps) {
      return PointResponse{nlStress(eps, p), nlTangent(eps, p)};
    }));
    u = out.back().displacement;
  }
  return out;
}

std::vector<PlasticReferenceStep> referenceSolvePlastic(const FemModel& model, const J2Params& p,
                                                        const LoadSchedule& schedule, const NewtonOptions& options)
{
  p.validate();
  std::vector<PlasticReferenceStep> out;
  out.reserve(schedule.size());
  std::vector<PlasticState> committed(model.numPoints(), PlasticState::virgin(p));
  std::vector<ReturnMapResult> trial(model.numPoints());
  Vector u = model.prescribedVector();
  const double loadScale = schedule.maxLoadNorm();

  for (std::size_t k = 0; k < schedule.size(); ++k) {
    PlasticReferenceStep step;
    static_cast<ReferenceStep&>(step) =
        newtonSolve(model, schedule.load(k), u, loadScale, options, [&](std::size_t e, const SymTensor& eps) {
          trial[e] = j2ReturnMap(eps, committed[e], p);
          return PointResponse{trial[e].stress, trial[e].tangent};
        });
    step.yielded.resize(model.numPoints());
    for (std::size_t e = 0; e < model.numPoints(); ++e) {
      committed[e] = trial[e].state;
      step.yielded[e] = trial[e].yielded;
    }
    step.history = committed;
    u = step.displacement;
    out.push_back(std::move(step));
  }
  return out;
}

LabeledDataSet virtualTestSample(const J2Params& p, const VirtualTestSpec& spec)
{
  p.validate();
  if (spec.paths < 1 || spec.stepsPerPath < 1) throw ParameterError("virtual test needs >= 1 path and step");
  if (!(spec.strainIncrement > 0.0 && spec.maxStrain >= spec.strainIncrement)) {
    throw ParameterError("virtual test needs 0 < strainIncrement <= maxStrain");
  }
  if (spec.minSegmentSteps < 1 || spec.maxSegmentSteps < spec.minSegmentSteps) {
    throw ParameterError("virtual test segment bounds are invalid");
  }

  std::vector<DataPoint> points;
  points.reserve(spec.paths * spec.stepsPerPath);
  for (std::size_t path = 0; path < spec.paths; ++path) {
    // Independent stream per path: the result does not depend on evaluation order.
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> segmentLength(spec.minSegmentSteps, spec.maxSegmentSteps);

    const auto randomDirection = [&] {
      Vec4 d(gauss(rng), gauss(rng), 0.0, gauss(rng));
      return Vec4(d.normalized());
    };

    PlasticState state = PlasticState::virgin(p);
    Vec4 strain = Vec4::Zero();
    Vec4 dir = randomDirection();
    int segmentLeft = segmentLength(rng);
    for (std::size_t s = 0; s < spec.stepsPerPath; ++s) {
      if (segmentLeft == 0) {
        if (unit(rng) < spec.reversalProbability) {
          dir = -dir;
        } else {
          dir = Vec4(dir + spec.directionJitter * randomDirection()).normalized();
        }
        segmentLeft = segmentLength(rng);
      }
      if ((strain + spec.strainIncrement * dir).norm() > spec.maxStrain) dir = -dir;
      strain += spec.strainIncrement * dir;
      --segmentLeft;

      const ReturnMapResult r = j2ReturnMap(SymTensor(strain), state, p);
      state = r.state;
      points.push_back({SymTensor(strain), r.stress, r.tangent, r.yielded ? Subset::inelastic : Subset::elastic});
    }
  }
  return LabeledDataSet(std::move(points), p.youngs);
}

}  // namespace ddm
