#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ddm/bench.hpp"
#include "ddm/dd_solver.hpp"
#include "ddm/errors.hpp"
#include "ddm/oracles.hpp"
#include "ddm/simd/phase_scan.hpp"

#ifndef DDM_VERSION
#define DDM_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ddm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNonConvergence = 2;

/// Thrown for command/config combinations that make no sense.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct Options
{
  std::string configPath;
  fs::path out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

RunConfig resolveConfig(const Options& o, ProblemKind defaultProblem)
{
  RunConfig c = o.configPath.empty() ? defaultConfig(defaultProblem) : loadRunConfig(o.configPath);
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  c.validate();
  return c;
}

std::ofstream openOut(const fs::path& path)
{
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  return f;
}

void writeManifest(const fs::path& dir, const std::string& command, const RunConfig& c, const json& outputs,
                   const json& summary)
{
  const std::string configJson = toJson(c);
  json m;
  m["tool"] = "ddmech";
  m["version"] = DDM_VERSION;
  m["command"] = command;
  m["config"] = json::parse(configJson);
  m["configHash"] = configHash(configJson);
  m["seed"] = c.seed;
  m["threads"] = c.threads;
  m["isa"] = simd::isaName(simd::activeIsa());
  m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  m["outputs"] = outputs;
  m["summary"] = summary;
  openOut(dir / "manifest.json") << m.dump(2) << '\n';
}

json studyRowsJson(const std::vector<StudyRow>& rows)
{
  json out = json::array();
  for (const auto& r : rows) {
    json seeds = json::array();
    json values = json::array();
    for (const auto& rep : r.replicas) {
      seeds.push_back(rep.seed);
      values.push_back(rep.rmsd);
    }
    out.push_back({{"sizeParameter", r.sizeParameter},
                   {"datasetSize", r.datasetSize},
                   {"noiseLevel", r.noiseLevel},
                   {"distribution", schemeName(r.distribution)},
                   {"replicaSeeds", seeds},
                   {"replicaRMSD", values}});
  }
  return out;
}

int generateData(const Options& o)
{
  const RunConfig c = resolveConfig(o, ProblemKind::tube);
  const LabeledDataSet ds = makeDataset(c, c.seed);
  saveDataset(ds, o.out / "dataset.txt");
  writeManifest(o.out, "generate-data", c, {"dataset.txt"},
                {{"points", ds.size()},
                 {"elastic", ds.count(Subset::elastic)},
                 {"inelastic", ds.count(Subset::inelastic)},
                 {"metricModulus", ds.metricModulus()}});
  std::printf("wrote %zu points to %s\n", ds.size(), (o.out / "dataset.txt").c_str());
  return kExitOk;
}

int runSingle(const Options& o, const std::string& command, ProblemKind defaultProblem, MaterialKind required)
{
  const RunConfig c = resolveConfig(o, defaultProblem);
  if (c.material() != required) {
    throw UsageError(command + " needs a " + (required == MaterialKind::j2 ? "J2" : "nonlinear elastic") +
                     " problem; got problem '" + std::string(problemName(c.problem)) + "'");
  }
  const Problem problem = buildProblem(c);
  const ReferenceHistory reference = solveReference(problem, c);
  const LabeledDataSet ds = makeDataset(c, c.seed);
  const RunResult run = runProblem(problem, ds, reference, c);

  const std::string csv = command == "run-plastic" ? "run_plastic.csv" : "run_elastic.csv";
  std::ofstream f = openOut(o.out / csv);
  writeRunCsv(run, f);
  writeManifest(o.out, command, c, {csv},
                {{"rmsd", run.rmsd},
                 {"meanIterations", run.meanIterations},
                 {"nonConvergedSteps", run.nonConverged},
                 {"datasetSize", ds.size()},
                 {"materialPoints", problem.model.numPoints()},
                 {"seconds", run.seconds}});
  std::printf("%s: %zu steps, RMSD %.6g, mean iterations %.3f, non-converged steps %d\n", command.c_str(),
              run.steps.size(), run.rmsd, run.meanIterations, run.nonConverged);
  return run.nonConverged > 0 ? kExitNonConvergence : kExitOk;
}

int runStudy(const Options& o, const std::string& command)
{
  const RunConfig c = resolveConfig(o, ProblemKind::tube);
  const bool convergence = command == "convergence-study";
  const std::vector<StudyRow> rows = convergence ? convergenceStudy(c) : noiseStudy(c);
  const std::string csv = convergence ? "convergence.csv" : "noise.csv";
  std::ofstream f = openOut(o.out / csv);
  if (convergence) {
    writeConvergenceCsv(rows, c.seed, f);
  } else {
    writeNoiseCsv(rows, c.seed, f);
  }
  int nonConverged = 0;
  for (const auto& r : rows) nonConverged += r.nonConverged;
  writeManifest(o.out, command, c, {csv}, {{"rows", studyRowsJson(rows)}, {"nonConvergedSteps", nonConverged}});
  std::printf("%s: %zu rows written to %s\n", command.c_str(), rows.size(), (o.out / csv).c_str());
  return nonConverged > 0 ? kExitNonConvergence : kExitOk;
}

int runReference(const Options& o)
{
  const RunConfig c = resolveConfig(o, ProblemKind::tube);
  const Problem problem = buildProblem(c);
  const ReferenceHistory ref = solveReference(problem, c);
  std::ofstream f = openOut(o.out / "reference.csv");
  f << "step,load,maxDisplacement,yieldedPoints\n";
  char buf[128];
  for (std::size_t k = 0; k < ref.states.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%zu\n", k + 1, problem.loadLevels[k],
                  maxDisplacement(ref.displacements[k]), ref.yieldedPoints[k]);
    f << buf;
  }
  writeManifest(o.out, "reference", c, {"reference.csv"},
                {{"steps", ref.states.size()}, {"materialPoints", problem.model.numPoints()}});
  std::printf("reference: %zu steps written to %s\n", ref.states.size(), (o.out / "reference.csv").c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Data-driven solid mechanics with tangent-space data and transition rules"};
  app.set_version_flag("--version", DDM_VERSION);
  app.require_subcommand(1);

  Options opts;
  std::string chosen;
  const auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.configPath, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output directory")->capture_default_str();
    sub->add_option("--seed", opts.seed, "base seed (overrides the config)");
    sub->add_option("--threads", opts.threads, "worker threads for replicas")->check(CLI::PositiveNumber);
    sub->callback([&chosen, name] { chosen = name; });
  };
  add("generate-data", "sample or virtual-test a dataset and write it");
  add("run-elastic", "data-driven nonlinear elastic run against the Newton reference");
  add("run-plastic", "data-driven elasto-plastic run with transition rules");
  add("convergence-study", "replicated runs over dataset sizes");
  add("noise-study", "replicated runs over noise levels and distributions");
  add("reference", "constitutive-model reference solve only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    fs::create_directories(opts.out);
    if (chosen == "generate-data") return generateData(opts);
    if (chosen == "run-elastic") return runSingle(opts, chosen, ProblemKind::tube, MaterialKind::nonlinearElastic);
    if (chosen == "run-plastic") return runSingle(opts, chosen, ProblemKind::plateHole, MaterialKind::j2);
    if (chosen == "convergence-study" || chosen == "noise-study") return runStudy(opts, chosen);
    if (chosen == "reference") return runReference(opts);
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const NewtonConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
