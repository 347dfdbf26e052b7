#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ddm/dataset.hpp"
#include "ddm/dd_solver.hpp"
#include "ddm/fem.hpp"
#include "ddm/inelastic.hpp"
#include "ddm/nn_index.hpp"
#include "ddm/run_config.hpp"

namespace ddm {

/// sqrt( sum w |z - zRef|^2 / sum w |zRef|^2 ) with the metric's squared norm. Throws on a zero reference.
double stepError(std::span<const MechState> z, std::span<const MechState> zRef, std::span<const double> weights,
                 const PhaseMetric& metric);
double stepError(std::span<const MechState> z, std::span<const MechState> zRef, const FemModel& model,
                 const PhaseMetric& metric);

/**
 * sqrt( sum_{k=0}^{T} Error_k^2 / T ) for a history of T + 1 step errors;
 * the normalization counts one term fewer than the sum. Needs >= 2 entries.
 */
double rmsd(std::span<const double> stepErrors);

struct Problem
{
  ProblemKind kind;
  MaterialKind material;
  FemModel model;
  LoadSchedule schedule;
  std::vector<double> loadLevels;  // applied pressure or traction per step, Pa
  std::vector<double> weights;
};

Problem buildProblem(const RunConfig& config);

/// Pressure (5e4 / sqrt 3) ln(r2 / r1) t on the inner tube wall.
double tubePressure(double r1, double r2, double t);
/// Piecewise-linear turning points starting at 0, excluding the initial zero.
std::vector<double> piecewiseLinearProgram(std::span<const double> peaks, int stepsPerSegment);

struct ReferenceHistory
{
  std::vector<Vector> displacements;
  std::vector<std::vector<MechState>> states;
  std::vector<std::size_t> yieldedPoints;
};

/// Oracle-only solve of the problem (Newton with the nonlinear law or with J2).
ReferenceHistory solveReference(const Problem& problem, const RunConfig& config);

/// Samples, loads, or virtual-tests the dataset described by config.dataset, then applies its noise.
LabeledDataSet makeDataset(const RunConfig& config, std::uint64_t seed);

/// Largest nodal displacement magnitude.
double maxDisplacement(const Vector& u);

struct StepRecord
{
  double loadLevel = 0.0;
  int iterations = 0;
  bool cycleDetected = false;
  bool converged = true;
  double distance = 0.0;
  double error = 0.0;
  double maxDisplacement = 0.0;
  double referenceMaxDisplacement = 0.0;
  std::size_t inelasticPoints = 0;
};

struct RunResult
{
  std::vector<StepRecord> steps;
  std::vector<std::vector<MechState>> states;
  std::vector<Vector> displacements;
  std::vector<std::vector<PointHistory>> histories;  // J2 problems only
  double rmsd = 0.0;
  double meanIterations = 0.0;
  int nonConverged = 0;  // steps that hit maxIter; their last iterate is kept
  double seconds = 0.0;
};

/**
 * Data-driven run over the problem's load schedule. Elastic materials use
 * config.solver.method with assignments carried across steps; J2 problems
 * use the transition rules. Errors are measured against `reference`.
 */
RunResult runProblem(const Problem& problem, const LabeledDataSet& data, const ReferenceHistory& reference,
                     const RunConfig& config);

/// Deterministic per-replica seed derived from the run seed and study coordinates.
std::uint64_t replicaSeed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

struct ReplicaOutcome
{
  std::uint64_t seed = 0;
  std::size_t datasetSize = 0;
  double rmsd = 0.0;
  double meanIterations = 0.0;
  int nonConverged = 0;
  double seconds = 0.0;
};

struct StudyRow
{
  std::size_t sizeParameter = 0;  // per-axis size or total count, as configured
  std::size_t datasetSize = 0;
  double noiseLevel = 0.0;
  SamplingScheme distribution = SamplingScheme::randomNormal;
  double meanRMSD = 0.0;
  double minRMSD = 0.0;
  double maxRMSD = 0.0;
  double stdRMSD = 0.0;
  double meanIterations = 0.0;
  int nonConverged = 0;
  double runtime = 0.0;  // mean seconds per replica
  std::vector<ReplicaOutcome> replicas;
};

/// One row per dataset size in config.study.sizes, config.study.replicas replicas each.
std::vector<StudyRow> convergenceStudy(const RunConfig& config);
/// One row per (distribution, noise level); replicas share datasets across levels.
std::vector<StudyRow> noiseStudy(const RunConfig& config);

void writeConvergenceCsv(std::span<const StudyRow> rows, std::uint64_t seed, std::ostream& out);
void writeNoiseCsv(std::span<const StudyRow> rows, std::uint64_t seed, std::ostream& out);
void writeRunCsv(const RunResult& run, std::ostream& out);

/// Calls fn(i) for i in [0, n) on up to `threads` workers; rethrows the lowest-index exception.
void parallelFor(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Least-squares slope of log(y) against log(x).
double logLogSlope(std::span<const double> x, std::span<const double> y);

}  // namespace ddm
