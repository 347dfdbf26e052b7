#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ddm/constitutive.hpp"
#include "ddm/dataset.hpp"
#include "ddm/fem.hpp"
#include "ddm/nn_index.hpp"

namespace ddm {

/// Newton iteration exhausted its iteration budget.
class NewtonConvergenceError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

struct NewtonOptions
{
  double relTol = 1e-8;  // residual <= relTol * max(|f_k|, loadScale)
  int maxIter = 50;
};

struct ReferenceStep
{
  Vector displacement;
  std::vector<MechState> states;
  int newtonIterations = 0;
  double residual = 0.0;
};

struct PlasticReferenceStep : ReferenceStep
{
  std::vector<PlasticState> history;
  std::vector<bool> yielded;
};

/// Single linear solve with one elasticity tensor at every point.
ReferenceStep referenceSolveLinear(const FemModel& model, const TangentMatrix& elasticity, const Vector& load);

/**
 * Newton-Raphson equilibrium with the nonlinear elastic law at every load
 * step. The residual scale is max(|f_k|, largest |f| of the schedule), so
 * zero-load steps are judged against the schedule's magnitude.
 */
std::vector<ReferenceStep> referenceSolveNonlinear(const FemModel& model, const NonlinearElasticParams& p,
                                                   const LoadSchedule& schedule, const NewtonOptions& options = {});

/// Newton-Raphson with the J2 return map at every point; history carried between steps.
std::vector<PlasticReferenceStep> referenceSolvePlastic(const FemModel& model, const J2Params& p,
                                                        const LoadSchedule& schedule,
                                                        const NewtonOptions& options = {});

/**
 * Random piecewise-linear strain paths at a single material point. Each
 * path starts from the virgin state at zero strain and walks in segments of
 * random length; at a segment end the direction reverses with probability
 * `reversalProbability`, otherwise it is jittered. Paths are reflected back
 * when |eps| would exceed maxStrain.
 */
struct VirtualTestSpec
{
  std::size_t paths = 100;
  std::size_t stepsPerPath = 100;
  double maxStrain = 1e-2;         // Mandel norm bound
  double strainIncrement = 2.5e-4; // Mandel norm of one step
  int minSegmentSteps = 2;
  int maxSegmentSteps = 12;
  double reversalProbability = 0.35;
  double directionJitter = 0.3;
  std::uint64_t seed = 1;
};

/// Records (eps, sigma, Ct, label) at every step; label = inelastic when the return map yielded.
LabeledDataSet virtualTestSample(const J2Params& p, const VirtualTestSpec& spec);

}  // namespace ddm
