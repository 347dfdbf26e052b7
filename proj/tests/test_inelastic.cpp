#include <doctest.h>

#include <cmath>

#include "ddm/constitutive.hpp"
#include "ddm/errors.hpp"
#include "ddm/inelastic.hpp"
#include "ddm/mesh.hpp"
#include "ddm/oracles.hpp"

using namespace ddm;

namespace {

constexpr double kSigmaY0 = 250e6;

/// Three hand-made points: elastic at 0 and 1, inelastic at 2.
LabeledDataSet tinySet()
{
  const TangentMatrix c = isotropicElasticityLame(200e9, 0.3);
  return LabeledDataSet({{SymTensor(), SymTensor(), c, Subset::elastic},
                         {SymTensor(1e-3, 0, 0, 0), SymTensor(3e8, 1e8, 1e8, 0), c, Subset::elastic},
                         {SymTensor(2e-3, 0, 0, 0), SymTensor(4e8, 1e8, 1e8, 0), c, Subset::inelastic}},
                        200e9);
}

/// Deviatoric uniaxial-like stress with comparison stress q.
SymTensor stressWithVonMises(double q) { return SymTensor(2.0 / 3.0 * q, -1.0 / 3.0 * q, -1.0 / 3.0 * q, 0.0); }

DDSolution solutionWith(std::vector<MechState> states)
{
  DDSolution s;
  s.states = std::move(states);
  return s;
}

struct PlateFixture
{
  FemModel model = buildFemModel(generatePlateWithHole(1.0, 0.2, 0.05, 3), {{"clamp", DofComponent::both, 0.0}});
  Vector unit = tractionLoad(model, "load", Eigen::Vector2d(0.0, -1.0));
  LabeledDataSet data = [] {
    VirtualTestSpec v;
    v.paths = 60;
    v.stepsPerPath = 100;
    return virtualTestSample(J2Params{}, v);
  }();
  PhaseMetric metric{200e9};
  PartitionedData parts{data, metric};
  std::vector<const PartitionedData*> sets = uniformData(parts, model.numPoints());
};

}  // namespace

TEST_CASE("initial histories start elastic at the initial yield stress")
{
  const LabeledDataSet ds = tinySet();
  const PartitionedData parts(ds, PhaseMetric(200e9));
  const auto sets = uniformData(parts, 4);
  const auto h = initialHistories(sets, kSigmaY0);
  REQUIRE(h.size() == 4);
  for (const PointHistory& p : h) {
    CHECK(p.yieldStress == kSigmaY0);
    CHECK(p.currentSubset == Subset::elastic);
    CHECK(p.assignedIndex == 0);
  }
  CHECK_THROWS_AS(initialHistories(sets, 0.0), ParameterError);
}

TEST_CASE("classification uses the modeling-point stress, boundary case is inelastic")
{
  const LabeledDataSet ds = tinySet();
  const PartitionedData parts(ds, PhaseMetric(200e9));
  const auto sets = uniformData(parts, 3);
  const std::vector<PointHistory> before(3, PointHistory{kSigmaY0, Subset::elastic, 0});

  // Point 0 below yield, point 1 exactly on it, point 2 above.
  const DDSolution sol = solutionWith({{SymTensor(), stressWithVonMises(1e8)},
                                       {SymTensor(), stressWithVonMises(kSigmaY0)},
                                       {SymTensor(2e-3, 0, 0, 0), stressWithVonMises(3e8)}});
  REQUIRE(vonMisesStress(stressWithVonMises(kSigmaY0)) == doctest::Approx(kSigmaY0).epsilon(1e-15));
  // Make point 1 sit exactly on the surface by using the computed comparison stress.
  std::vector<PointHistory> hist = before;
  hist[1].yieldStress = vonMisesStress(sol.states[1].stress);

  const auto after = applyTransition(sets, hist, sol);
  CHECK(after[0].currentSubset == Subset::elastic);
  CHECK(after[0].yieldStress == kSigmaY0);
  CHECK(after[1].currentSubset == Subset::inelastic);
  CHECK(after[1].yieldStress == hist[1].yieldStress);
  CHECK(after[2].currentSubset == Subset::inelastic);
  CHECK(after[2].yieldStress == vonMisesStress(sol.states[2].stress));
  // Re-assignment is the nearest point of the new subset.
  CHECK(after[0].assignedIndex == 0);
  CHECK(after[2].assignedIndex == 2);
  CHECK(ds[after[1].assignedIndex].label == Subset::inelastic);
}

TEST_CASE("an inelastic point whose comparison stress drops returns to the elastic subset")
{
  const LabeledDataSet ds = tinySet();
  const PartitionedData parts(ds, PhaseMetric(200e9));
  const auto sets = uniformData(parts, 1);
  const std::vector<PointHistory> h{{3e8, Subset::inelastic, 2}};
  const auto after = applyTransition(sets, h, solutionWith({{SymTensor(1e-3, 0, 0, 0), stressWithVonMises(2.9e8)}}));
  CHECK(after[0].currentSubset == Subset::elastic);
  CHECK(after[0].yieldStress == 3e8);
  CHECK(ds[after[0].assignedIndex].label == Subset::elastic);
}

TEST_CASE("clamping never changes the inelastic branch")
{
  const LabeledDataSet ds = tinySet();
  const PartitionedData parts(ds, PhaseMetric(200e9));
  const auto sets = uniformData(parts, 1);
  const std::vector<PointHistory> h{{kSigmaY0, Subset::elastic, 0}};
  const DDSolution s = solutionWith({{SymTensor(), stressWithVonMises(2.6e8)}});
  TransitionOptions off;
  off.clampYieldStress = false;
  const auto a = applyTransition(sets, h, s), b = applyTransition(sets, h, s, off);
  CHECK(a[0].yieldStress == b[0].yieldStress);
  CHECK(a[0].currentSubset == b[0].currentSubset);
}

TEST_CASE("a missing inelastic subset is reported with advice")
{
  const TangentMatrix c = isotropicElasticityLame(200e9, 0.3);
  const LabeledDataSet ds({{SymTensor(), SymTensor(), c, Subset::elastic}}, 200e9);
  const PartitionedData parts(ds, PhaseMetric(200e9));
  const auto sets = uniformData(parts, 1);
  const std::vector<PointHistory> h{{kSigmaY0, Subset::elastic, 0}};
  CHECK_THROWS_WITH_AS(applyTransition(sets, h, solutionWith({{SymTensor(), stressWithVonMises(3e8)}})),
                       doctest::Contains("larger dataset"), EmptyDataError);
  CHECK_THROWS_AS(applyTransition(sets, h, solutionWith({})), ParameterError);
}

TEST_CASE("plate: small loads stay elastic, repeated step is a fixed point")
{
  PlateFixture f;
  const auto h0 = initialHistories(f.sets, kSigmaY0);
  const TransitionResult r1 = transitionStep(f.model, f.sets, h0, 1e6 * f.unit, f.metric);
  for (const PointHistory& h : r1.histories) {
    CHECK(h.currentSubset == Subset::elastic);
    CHECK(h.yieldStress == kSigmaY0);
  }
  const TransitionResult r2 = transitionStep(f.model, f.sets, r1.histories, 1e6 * f.unit, f.metric);
  if (!r1.solution.cycleDetected) {
    CHECK(r2.solution.iterations == 1);
    CHECK(r2.solution.assignment == r1.solution.assignment);
  }
}

TEST_CASE("property: plate load cycle transition semantics")
{
  PlateFixture f;
  LoadSchedule schedule{f.unit, {}};
  for (int k = 1; k <= 10; ++k) schedule.factors.push_back(1.8e6 * k);
  for (int k = 9; k >= 0; --k) schedule.factors.push_back(1.8e6 * k);
  const LoadProgramResult run = runLoadProgram(f.model, f.sets, schedule, f.metric, kSigmaY0);
  REQUIRE(run.histories.size() == schedule.size());

  std::vector<bool> everYielded(f.model.numPoints(), false);
  std::vector<PointHistory> previous = initialHistories(f.sets, kSigmaY0);
  for (std::size_t k = 0; k < run.steps.size(); ++k) {
    for (std::size_t e = 0; e < f.model.numPoints(); ++e) {
      const PointHistory& h = run.histories[k][e];
      // Yield stress never decreases; the solver used the previous step's subset.
      CHECK(h.yieldStress >= previous[e].yieldStress);
      CHECK(f.data[run.steps[k].assignment[e]].label == previous[e].currentSubset);
      // Elastic flags satisfy the yield condition with the converged stress.
      if (h.currentSubset == Subset::elastic) CHECK(vonMisesStress(run.steps[k].states[e].stress) < h.yieldStress);
      CHECK(f.data[h.assignedIndex].label == h.currentSubset);
      everYielded[e] = everYielded[e] || h.currentSubset == Subset::inelastic;
    }
    previous = run.histories[k];
  }
  std::size_t yielded = 0;
  for (bool y : everYielded) yielded += y;
  CHECK(yielded > 0);
  // Early load levels are purely elastic.
  for (const PointHistory& h : run.histories[0]) CHECK(h.currentSubset == Subset::elastic);
}
