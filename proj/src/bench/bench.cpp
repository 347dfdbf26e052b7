#include "ddm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>

#include "ddm/errors.hpp"
#include "ddm/oracles.hpp"

namespace ddm {

double stepError(std::span<const MechState> z, std::span<const MechState> zRef, std::span<const double> weights,
                 const PhaseMetric& metric)
{
  if (z.size() != zRef.size() || z.size() != weights.size()) {
    throw ParameterError("stepError: state, reference and weight counts differ");
  }
  const MechState zero{};
  double num = 0.0;
  double den = 0.0;
  for (std::size_t e = 0; e < z.size(); ++e) {
    num += weights[e] * localDistance(z[e], zRef[e], metric);
    den += weights[e] * localDistance(zero, zRef[e], metric);
  }
  if (!(den > 0.0)) throw ParameterError("stepError: reference state is zero");
  return std::sqrt(num / den);
}

double stepError(std::span<const MechState> z, std::span<const MechState> zRef, const FemModel& model,
                 const PhaseMetric& metric)
{
  std::vector<double> w(model.numPoints());
  for (std::size_t e = 0; e < w.size(); ++e) w[e] = model.point(e).weight;
  return stepError(z, zRef, w, metric);
}

double rmsd(std::span<const double> stepErrors)
{
  if (stepErrors.size() < 2) throw ParameterError("rmsd needs at least two step errors");
  double sum = 0.0;
  for (double e : stepErrors) sum += e * e;
  return std::sqrt(sum / static_cast<double>(stepErrors.size() - 1));
}

double tubePressure(double r1, double r2, double t) { return 5e4 / std::sqrt(3.0) * std::log(r2 / r1) * t; }

std::vector<double> piecewiseLinearProgram(std::span<const double> peaks, int stepsPerSegment)
{
  if (stepsPerSegment < 1) throw ParameterError("stepsPerSegment must be >= 1");
  std::vector<double> out;
  double from = 0.0;
  for (double to : peaks) {
    for (int i = 1; i <= stepsPerSegment; ++i) {
      out.push_back(i == stepsPerSegment ? to : from + (to - from) * i / stepsPerSegment);
    }
    from = to;
  }
  return out;
}

Problem buildProblem(const RunConfig& config)
{
  config.validate();
  Mesh mesh;
  std::vector<DirichletSpec> bcs;
  switch (config.problem) {
    case ProblemKind::tube:
      mesh = generateQuarterAnnulus(config.tube.r1, config.tube.r2, config.tube.nRadial, config.tube.nCirc);
      bcs = {{"xsym", DofComponent::x, 0.0}, {"ysym", DofComponent::y, 0.0}};
      break;
    case ProblemKind::plateHole:
      mesh = generatePlateWithHole(config.plate.length, config.plate.height, config.plate.radius,
                                   config.plate.refinement);
      bcs = {{"clamp", DofComponent::both, 0.0}};
      break;
    case ProblemKind::mesh:
      mesh = readMesh(config.mesh.path);
      bcs = config.mesh.dirichlet;
      break;
  }

  FemModel model = buildFemModel(std::move(mesh), bcs);
  LoadSchedule schedule;
  std::vector<double> levels;
  switch (config.problem) {
    case ProblemKind::tube: {
      const double unit = tubePressure(config.tube.r1, config.tube.r2, 1.0);
      schedule.unitLoad = pressureLoad(model, "inner", unit);
      for (int k = 1; k <= config.tube.steps; ++k) {
        schedule.factors.push_back(config.tube.tMax * k / config.tube.steps);
        levels.push_back(unit * schedule.factors.back());
      }
      break;
    }
    case ProblemKind::plateHole:
      schedule.unitLoad = tractionLoad(model, "load", Eigen::Vector2d(0.0, -1.0));
      schedule.factors = piecewiseLinearProgram(config.plate.peaks, config.plate.stepsPerSegment);
      levels = schedule.factors;
      break;
    case ProblemKind::mesh: {
      const MeshLoadConfig& l = config.mesh.load;
      double scale = 1.0;
      if (l.kind == "pressure") {
        schedule.unitLoad = pressureLoad(model, l.edge, l.pressure);
        scale = l.pressure;
      } else {
        schedule.unitLoad = tractionLoad(model, l.edge, Eigen::Vector2d(l.traction[0], l.traction[1]));
        scale = std::hypot(l.traction[0], l.traction[1]);
      }
      schedule.factors = config.mesh.factors;
      for (double f : schedule.factors) levels.push_back(scale * f);
      break;
    }
  }

  std::vector<double> weights(model.numPoints());
  for (std::size_t e = 0; e < weights.size(); ++e) weights[e] = model.point(e).weight;
  return {config.problem, config.material(), std::move(model), std::move(schedule), std::move(levels),
          std::move(weights)};
}

ReferenceHistory solveReference(const Problem& problem, const RunConfig& config)
{
  ReferenceHistory out;
  if (problem.material == MaterialKind::j2) {
    for (auto& s : referenceSolvePlastic(problem.model, config.j2, problem.schedule, config.newton)) {
      out.displacements.push_back(std::move(s.displacement));
      out.states.push_back(std::move(s.states));
      out.yieldedPoints.push_back(static_cast<std::size_t>(std::count(s.yielded.begin(), s.yielded.end(), true)));
    }
  } else {
    for (auto& s : referenceSolveNonlinear(problem.model, config.nonlinear, problem.schedule, config.newton)) {
      out.displacements.push_back(std::move(s.displacement));
      out.states.push_back(std::move(s.states));
      out.yieldedPoints.push_back(0);
    }
  }
  return out;
}

std::uint64_t replicaSeed(std::uint64_t base, std::uint64_t a, std::uint64_t b)
{
  const auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(base ^ mix(a ^ mix(b)));
}

LabeledDataSet makeDataset(const RunConfig& config, std::uint64_t seed)
{
  const DatasetConfig& d = config.dataset;
  const double modulus = config.effectiveMetricModulus();
  LabeledDataSet ds;
  if (!d.path.empty()) {
    LabeledDataSet loaded = loadDataset(d.path);
    ds = LabeledDataSet(loaded.points(), modulus);
  } else if (config.material() == MaterialKind::j2) {
    VirtualTestSpec v = d.virtualTest;
    v.seed = seed;
    if (d.size <= v.stepsPerPath) {
      v.stepsPerPath = d.size;
      v.paths = 1;
    } else {
      v.paths = (d.size + v.stepsPerPath / 2) / v.stepsPerPath;
    }
    ds = LabeledDataSet(virtualTestSample(config.j2, v).points(), modulus);
  } else {
    SamplingSpec spec;
    spec.scheme = d.scheme;
    const bool grid = d.scheme == SamplingScheme::normalGrid || d.scheme == SamplingScheme::uniformGrid;
    spec.count = grid ? d.size : d.size * d.size * d.size;
    spec.stdDev = d.stdDev;
    spec.halfWidth = d.halfWidth;
    spec.seed = seed;
    ds = sampleDataset(ElasticOracle::fromId(d.oracle, config.nonlinear), spec, modulus);
  }
  if (d.noise > 0.0) ds = addNoise(ds, d.noise, replicaSeed(seed, 0x6e6f697365ULL, 0));
  return ds;
}

double maxDisplacement(const Vector& u)
{
  double best = 0.0;
  for (Eigen::Index i = 0; i + 1 < u.size(); i += 2) best = std::max(best, std::hypot(u[i], u[i + 1]));
  return best;
}

RunResult runProblem(const Problem& problem, const LabeledDataSet& data, const ReferenceHistory& reference,
                     const RunConfig& config)
{
  const auto start = std::chrono::steady_clock::now();
  const FemModel& model = problem.model;
  const std::size_t m = model.numPoints();
  const PhaseMetric metric(config.effectiveMetricModulus());
  if (reference.states.size() != problem.schedule.size()) throw ParameterError("reference history length mismatch");

  SolverOptions options;
  options.maxIter = config.solver.maxIter;
  options.tol = config.solver.tol < 0.0 ? defaultTolerance(model, data, metric) : config.solver.tol;

  RunResult out;
  const auto record = [&](std::size_t k, DDSolution s, bool converged) {
    StepRecord r;
    r.loadLevel = problem.loadLevels[k];
    r.iterations = s.iterations;
    r.cycleDetected = s.cycleDetected;
    r.converged = converged;
    r.distance = s.finalDistance;
    r.error = stepError(s.states, reference.states[k], problem.weights, metric);
    r.maxDisplacement = maxDisplacement(s.displacement);
    r.referenceMaxDisplacement = maxDisplacement(reference.displacements[k]);
    if (!converged) ++out.nonConverged;
    out.states.push_back(std::move(s.states));
    out.displacements.push_back(std::move(s.displacement));
    out.steps.push_back(r);
  };

  if (problem.material == MaterialKind::j2) {
    const PartitionedData partitioned(data, metric);
    const std::vector<const PartitionedData*> sets = uniformData(partitioned, m);
    TransitionOptions topt;
    topt.solver = options;
    topt.clampYieldStress = config.solver.clampYieldStress;
    std::vector<PointHistory> histories = initialHistories(sets, config.j2.initialYield);
    for (std::size_t k = 0; k < problem.schedule.size(); ++k) {
      DDSolution s;
      bool converged = true;
      try {
        TransitionResult r = transitionStep(model, sets, histories, problem.schedule.load(k), metric, topt);
        s = std::move(r.solution);
        histories = std::move(r.histories);
      } catch (const NonConvergenceError& e) {
        s = e.lastIterate();
        converged = false;
        histories = applyTransition(sets, histories, s, topt);
      }
      record(k, std::move(s), converged);
      out.steps.back().inelasticPoints = static_cast<std::size_t>(std::count_if(
          histories.begin(), histories.end(), [](const PointHistory& h) { return h.currentSubset == Subset::inelastic; }));
      out.histories.push_back(histories);
    }
  } else {
    const DataView view = DataView::all(data, metric);
    const std::vector<const DataView*> views = uniformViews(view, m);
    std::vector<std::size_t> assignment = zeroStateAssignment(views);
    for (std::size_t k = 0; k < problem.schedule.size(); ++k) {
      DDSolution s;
      bool converged = true;
      try {
        s = config.solver.method == SolverKind::classical
                ? classicalDDSolve(model, problem.schedule.load(k), views, assignment, metric, options)
                : ddSolveStep(model, problem.schedule.load(k), views, assignment, metric, options);
      } catch (const NonConvergenceError& e) {
        s = e.lastIterate();
        converged = false;
      }
      assignment = s.assignment;
      record(k, std::move(s), converged);
    }
  }

  std::vector<double> errors;
  double iterations = 0.0;
  for (const StepRecord& r : out.steps) {
    errors.push_back(r.error);
    iterations += r.iterations;
  }
  out.rmsd = errors.size() >= 2 ? rmsd(errors) : std::numeric_limits<double>::quiet_NaN();
  out.meanIterations = iterations / static_cast<double>(out.steps.size());
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void parallelFor(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn)
{
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double logLogSlope(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("logLogSlope needs >= 2 paired values");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

StudyRow aggregate(std::vector<ReplicaOutcome> replicas)
{
  StudyRow row;
  const double n = static_cast<double>(replicas.size());
  row.minRMSD = std::numeric_limits<double>::infinity();
  row.maxRMSD = -row.minRMSD;
  for (const auto& r : replicas) {
    row.meanRMSD += r.rmsd / n;
    row.minRMSD = std::min(row.minRMSD, r.rmsd);
    row.maxRMSD = std::max(row.maxRMSD, r.rmsd);
    row.meanIterations += r.meanIterations / n;
    row.nonConverged += r.nonConverged;
    row.runtime += r.seconds / n;
    row.datasetSize = r.datasetSize;
  }
  if (replicas.size() > 1) {
    double ss = 0.0;
    for (const auto& r : replicas) ss += (r.rmsd - row.meanRMSD) * (r.rmsd - row.meanRMSD);
    row.stdRMSD = std::sqrt(ss / (n - 1.0));
  }
  row.replicas = std::move(replicas);
  return row;
}

ReplicaOutcome runReplica(const Problem& problem, const ReferenceHistory& reference, const RunConfig& config,
                          std::uint64_t seed)
{
  const LabeledDataSet ds = makeDataset(config, seed);
  const RunResult run = runProblem(problem, ds, reference, config);
  return {seed, ds.size(), run.rmsd, run.meanIterations, run.nonConverged, run.seconds};
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<StudyRow> convergenceStudy(const RunConfig& config)
{
  if (config.study.sizes.empty()) throw ParameterError("convergence study needs at least one dataset size");
  const Problem problem = buildProblem(config);
  const ReferenceHistory reference = solveReference(problem, config);
  const std::size_t nSizes = config.study.sizes.size();
  const std::size_t nRep = config.study.replicas;

  std::vector<ReplicaOutcome> outcomes(nSizes * nRep);
  parallelFor(outcomes.size(), config.threads, [&](std::size_t task) {
    const std::size_t i = task / nRep;
    const std::size_t r = task % nRep;
    RunConfig c = config;
    c.dataset.size = config.study.sizes[i];
    outcomes[task] = runReplica(problem, reference, c, replicaSeed(config.seed, i, r));
  });

  std::vector<StudyRow> rows;
  for (std::size_t i = 0; i < nSizes; ++i) {
    StudyRow row = aggregate({outcomes.begin() + static_cast<long>(i * nRep),
                              outcomes.begin() + static_cast<long>((i + 1) * nRep)});
    row.sizeParameter = config.study.sizes[i];
    row.noiseLevel = config.dataset.noise;
    row.distribution = config.dataset.scheme;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<StudyRow> noiseStudy(const RunConfig& config)
{
  if (config.study.noiseLevels.empty() || config.study.distributions.empty()) {
    throw ParameterError("noise study needs noise levels and distributions");
  }
  const Problem problem = buildProblem(config);
  const ReferenceHistory reference = solveReference(problem, config);
  const auto& dists = config.study.distributions;
  const auto& levels = config.study.noiseLevels;
  const std::size_t nRep = config.study.replicas;

  std::vector<ReplicaOutcome> outcomes(dists.size() * levels.size() * nRep);
  parallelFor(outcomes.size(), config.threads, [&](std::size_t task) {
    const std::size_t r = task % nRep;
    const std::size_t l = (task / nRep) % levels.size();
    const std::size_t d = task / (nRep * levels.size());
    RunConfig c = config;
    c.dataset.scheme = dists[d];
    c.dataset.noise = levels[l];
    // The seed does not depend on the level: each replica sees one base dataset at every noise level.
    outcomes[task] = runReplica(problem, reference, c, replicaSeed(config.seed, d, r));
  });

  std::vector<StudyRow> rows;
  for (std::size_t d = 0; d < dists.size(); ++d) {
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const std::size_t first = (d * levels.size() + l) * nRep;
      StudyRow row = aggregate({outcomes.begin() + static_cast<long>(first),
                                outcomes.begin() + static_cast<long>(first + nRep)});
      row.sizeParameter = config.dataset.size;
      row.noiseLevel = levels[l];
      row.distribution = dists[d];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void writeConvergenceCsv(std::span<const StudyRow> rows, std::uint64_t seed, std::ostream& out)
{
  out << "datasetSize,sizeParameter,replicas,meanRMSD,minRMSD,maxRMSD,stdRMSD,meanIterations,nonConverged,runtime,seed\n";
  for (const auto& r : rows) {
    out << r.datasetSize << ',' << r.sizeParameter << ',' << r.replicas.size() << ',' << fmt(r.meanRMSD) << ','
        << fmt(r.minRMSD) << ',' << fmt(r.maxRMSD) << ',' << fmt(r.stdRMSD) << ',' << fmt(r.meanIterations) << ','
        << r.nonConverged << ',' << fmt(r.runtime) << ',' << seed << '\n';
  }
}

void writeNoiseCsv(std::span<const StudyRow> rows, std::uint64_t seed, std::ostream& out)
{
  out << "noiseLevel,distribution,datasetSize,replicas,meanRMSD,spread,minRMSD,maxRMSD,meanIterations,nonConverged,"
         "runtime,seed\n";
  for (const auto& r : rows) {
    out << fmt(r.noiseLevel) << ',' << schemeName(r.distribution) << ',' << r.datasetSize << ',' << r.replicas.size()
        << ',' << fmt(r.meanRMSD) << ',' << fmt(r.stdRMSD) << ',' << fmt(r.minRMSD) << ',' << fmt(r.maxRMSD) << ','
        << fmt(r.meanIterations) << ',' << r.nonConverged << ',' << fmt(r.runtime) << ',' << seed << '\n';
  }
}

void writeRunCsv(const RunResult& run, std::ostream& out)
{
  out << "step,load,iterations,converged,cycle,distance,error,maxDisplacement,referenceMaxDisplacement,"
         "inelasticPoints\n";
  for (std::size_t k = 0; k < run.steps.size(); ++k) {
    const StepRecord& r = run.steps[k];
    out << k + 1 << ',' << fmt(r.loadLevel) << ',' << r.iterations << ',' << r.converged << ',' << r.cycleDetected
        << ',' << fmt(r.distance) << ',' << fmt(r.error) << ',' << fmt(r.maxDisplacement) << ','
        << fmt(r.referenceMaxDisplacement) << ',' << r.inelasticPoints << '\n';
  }
}

}  // namespace ddm
