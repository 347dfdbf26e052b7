#include "ddm/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ddm/errors.hpp"

namespace ddm {

using nlohmann::json;

std::string_view problemName(ProblemKind p)
{
  switch (p) {
    case ProblemKind::tube: return "tube";
    case ProblemKind::plateHole: return "plateHole";
    case ProblemKind::mesh: return "mesh";
  }
  return "?";
}

ProblemKind parseProblem(std::string_view name)
{
  if (name == "tube") return ProblemKind::tube;
  if (name == "plateHole") return ProblemKind::plateHole;
  if (name == "mesh") return ProblemKind::mesh;
  throw ParameterError("unknown problem '" + std::string(name) + "' (tube, plateHole, mesh)");
}

namespace {

std::string_view materialName(MaterialKind m) { return m == MaterialKind::j2 ? "j2" : "nonlinear"; }

MaterialKind parseMaterial(std::string_view s)
{
  if (s == "j2") return MaterialKind::j2;
  if (s == "nonlinear") return MaterialKind::nonlinearElastic;
  throw ParameterError("unknown material '" + std::string(s) + "' (nonlinear, j2)");
}

std::string_view componentName(DofComponent c)
{
  switch (c) {
    case DofComponent::x: return "x";
    case DofComponent::y: return "y";
    case DofComponent::both: return "both";
  }
  return "?";
}

DofComponent parseComponent(std::string_view s)
{
  if (s == "x") return DofComponent::x;
  if (s == "y") return DofComponent::y;
  if (s == "both") return DofComponent::both;
  throw ParameterError("unknown dof component '" + std::string(s) + "' (x, y, both)");
}

/// Object reader that rejects keys it was never asked about.
class Obj
{
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j.is_object()) throw ParameterError("config: '" + path_ + "' must be an object");
  }
  ~Obj() noexcept(false)
  {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) throw ParameterError("config: unknown key '" + path_ + item.key() + "'");
    }
  }

  template <class T>
  void get(const char* key, T& out)
  {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ParameterError("config: '" + path_ + key + "': " + e.what());
    }
  }

  template <class F>
  void with(const char* key, F f)
  {
    seen_.insert(key);
    if (j_.contains(key)) f(j_.at(key), path_ + key + ".");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void readVirtualTest(const json& j, const std::string& path, VirtualTestSpec& v)
{
  Obj o(j, path);
  o.get("paths", v.paths);
  o.get("stepsPerPath", v.stepsPerPath);
  o.get("maxStrain", v.maxStrain);
  o.get("strainIncrement", v.strainIncrement);
  o.get("minSegmentSteps", v.minSegmentSteps);
  o.get("maxSegmentSteps", v.maxSegmentSteps);
  o.get("reversalProbability", v.reversalProbability);
  o.get("directionJitter", v.directionJitter);
}

void readConfig(const json& root, RunConfig& c)
{
  Obj o(root, "");
  std::string problem(problemName(c.problem));
  o.get("problem", problem);
  o.with("tube", [&](const json& j, const std::string& p) {
    Obj t(j, p);
    t.get("r1", c.tube.r1);
    t.get("r2", c.tube.r2);
    t.get("nRadial", c.tube.nRadial);
    t.get("nCirc", c.tube.nCirc);
    t.get("tMax", c.tube.tMax);
    t.get("steps", c.tube.steps);
  });
  o.with("plate", [&](const json& j, const std::string& p) {
    Obj t(j, p);
    t.get("length", c.plate.length);
    t.get("height", c.plate.height);
    t.get("radius", c.plate.radius);
    t.get("refinement", c.plate.refinement);
    t.get("peaks", c.plate.peaks);
    t.get("stepsPerSegment", c.plate.stepsPerSegment);
  });
  o.with("mesh", [&](const json& j, const std::string& p) {
    Obj t(j, p);
    std::string path = c.mesh.path.string();
    t.get("path", path);
    c.mesh.path = path;
    t.with("dirichlet", [&](const json& list, const std::string& lp) {
      if (!list.is_array()) throw ParameterError("config: '" + lp + "' must be an array");
      c.mesh.dirichlet.clear();
      for (const json& item : list) {
        Obj d(item, lp);
        DirichletSpec spec;
        std::string component = "both";
        d.get("edge", spec.edgeTag);
        d.get("component", component);
        d.get("value", spec.value);
        spec.component = parseComponent(component);
        c.mesh.dirichlet.push_back(spec);
      }
    });
    t.with("load", [&](const json& lj, const std::string& lp) {
      Obj l(lj, lp);
      l.get("edge", c.mesh.load.edge);
      l.get("kind", c.mesh.load.kind);
      l.get("pressure", c.mesh.load.pressure);
      l.get("traction", c.mesh.load.traction);
    });
    t.get("factors", c.mesh.factors);
    std::string material(materialName(c.mesh.material));
    t.get("material", material);
    c.mesh.material = parseMaterial(material);
  });
  o.with("material", [&](const json& j, const std::string& p) {
    Obj m(j, p);
    m.with("nonlinear", [&](const json& nj, const std::string& np) {
      Obj n(nj, np);
      n.get("E", c.nonlinear.youngs);
      n.get("nu", c.nonlinear.poisson);
      n.get("c1", c.nonlinear.c1);
      n.get("c2", c.nonlinear.c2);
    });
    m.with("j2", [&](const json& jj, const std::string& jp) {
      Obj n(jj, jp);
      n.get("E", c.j2.youngs);
      n.get("nu", c.j2.poisson);
      n.get("H", c.j2.hardening);
      n.get("sigmaY0", c.j2.initialYield);
    });
  });
  o.with("dataset", [&](const json& j, const std::string& p) {
    Obj d(j, p);
    std::string scheme(schemeName(c.dataset.scheme));
    std::string path = c.dataset.path.string();
    d.get("oracle", c.dataset.oracle);
    d.get("scheme", scheme);
    d.get("size", c.dataset.size);
    d.get("stdDev", c.dataset.stdDev);
    d.get("halfWidth", c.dataset.halfWidth);
    d.get("noise", c.dataset.noise);
    d.get("path", path);
    d.with("virtualTest", [&](const json& vj, const std::string& vp) { readVirtualTest(vj, vp, c.dataset.virtualTest); });
    c.dataset.scheme = parseScheme(scheme);
    c.dataset.path = path;
  });
  o.get("metricModulus", c.metricModulus);
  o.with("solver", [&](const json& j, const std::string& p) {
    Obj s(j, p);
    std::string method = c.solver.method == SolverKind::classical ? "classical" : "extended";
    s.get("method", method);
    s.get("tol", c.solver.tol);
    s.get("maxIter", c.solver.maxIter);
    s.get("clampYieldStress", c.solver.clampYieldStress);
    if (method == "extended") {
      c.solver.method = SolverKind::extended;
    } else if (method == "classical") {
      c.solver.method = SolverKind::classical;
    } else {
      throw ParameterError("config: unknown solver method '" + method + "' (extended, classical)");
    }
  });
  o.with("newton", [&](const json& j, const std::string& p) {
    Obj n(j, p);
    n.get("relTol", c.newton.relTol);
    n.get("maxIter", c.newton.maxIter);
  });
  o.with("study", [&](const json& j, const std::string& p) {
    Obj s(j, p);
    std::vector<std::string> distributions;
    for (SamplingScheme d : c.study.distributions) distributions.emplace_back(schemeName(d));
    s.get("sizes", c.study.sizes);
    s.get("noiseLevels", c.study.noiseLevels);
    s.get("distributions", distributions);
    s.get("replicas", c.study.replicas);
    c.study.distributions.clear();
    for (const auto& d : distributions) c.study.distributions.push_back(parseScheme(d));
  });
  o.get("seed", c.seed);
  o.get("threads", c.threads);
}

}  // namespace

MaterialKind RunConfig::material() const
{
  switch (problem) {
    case ProblemKind::tube: return MaterialKind::nonlinearElastic;
    case ProblemKind::plateHole: return MaterialKind::j2;
    case ProblemKind::mesh: return mesh.material;
  }
  return MaterialKind::nonlinearElastic;
}

double RunConfig::effectiveMetricModulus() const
{
  if (metricModulus > 0.0) return metricModulus;
  return material() == MaterialKind::j2 ? j2.youngs : nonlinear.youngs;
}

void RunConfig::validate() const
{
  if (metricModulus < 0.0) throw ParameterError("metricModulus must be >= 0 (0 selects the material modulus)");
  if (study.replicas < 1) throw ParameterError("replication count must be >= 1");
  if (threads < 1) throw ParameterError("threads must be >= 1");
  if (dataset.size < 1) throw ParameterError("dataset size must be >= 1");
  if (dataset.noise < 0.0) throw ParameterError("noise level must be >= 0");
  if (solver.maxIter < 1) throw ParameterError("solver.maxIter must be >= 1");
  if (problem == ProblemKind::tube && tube.steps < 1) throw ParameterError("tube.steps must be >= 1");
  if (problem == ProblemKind::plateHole && (plate.stepsPerSegment < 1 || plate.peaks.empty())) {
    throw ParameterError("plate load program needs peaks and stepsPerSegment >= 1");
  }
  if (problem == ProblemKind::mesh) {
    if (mesh.path.empty() || !std::filesystem::exists(mesh.path)) {
      throw ParameterError("mesh file '" + mesh.path.string() + "' does not exist");
    }
    if (mesh.factors.empty()) throw ParameterError("mesh.factors must list at least one load factor");
    if (mesh.load.kind != "pressure" && mesh.load.kind != "traction") {
      throw ParameterError("mesh.load.kind must be pressure or traction");
    }
  }
  if (!dataset.path.empty() && !std::filesystem::exists(dataset.path)) {
    throw ParameterError("dataset file '" + dataset.path.string() + "' does not exist");
  }
  for (double level : study.noiseLevels) {
    if (level < 0.0) throw ParameterError("noise levels must be >= 0");
  }
  for (std::size_t s : study.sizes) {
    if (s < 1) throw ParameterError("study sizes must be >= 1");
  }
  nonlinear.validate();
  j2.validate();
}

RunConfig defaultConfig(ProblemKind problem)
{
  RunConfig c;
  c.problem = problem;
  if (problem == ProblemKind::plateHole) {
    c.dataset.size = 10000;
    c.study.sizes = {100, 1000, 10000};
  }
  return c;
}

RunConfig parseRunConfig(const std::string& text)
{
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParameterError("config must be a JSON object");
  ProblemKind problem = ProblemKind::tube;
  if (root.contains("problem")) {
    if (!root["problem"].is_string()) throw ParameterError("config: 'problem' must be a string");
    problem = parseProblem(root["problem"].get<std::string>());
  }
  RunConfig c = defaultConfig(problem);
  readConfig(root, c);
  c.problem = problem;
  return c;
}

RunConfig loadRunConfig(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parseRunConfig(ss.str());
}

std::string toJson(const RunConfig& c)
{
  json j;
  j["problem"] = problemName(c.problem);
  j["tube"] = {{"r1", c.tube.r1}, {"r2", c.tube.r2},     {"nRadial", c.tube.nRadial},
               {"nCirc", c.tube.nCirc}, {"tMax", c.tube.tMax}, {"steps", c.tube.steps}};
  j["plate"] = {{"length", c.plate.length},         {"height", c.plate.height}, {"radius", c.plate.radius},
                {"refinement", c.plate.refinement}, {"peaks", c.plate.peaks},   {"stepsPerSegment", c.plate.stepsPerSegment}};
  json dirichlet = json::array();
  for (const auto& d : c.mesh.dirichlet) {
    dirichlet.push_back({{"edge", d.edgeTag}, {"component", componentName(d.component)}, {"value", d.value}});
  }
  j["mesh"] = {{"path", c.mesh.path.string()},
               {"dirichlet", dirichlet},
               {"load",
                {{"edge", c.mesh.load.edge},
                 {"kind", c.mesh.load.kind},
                 {"pressure", c.mesh.load.pressure},
                 {"traction", c.mesh.load.traction}}},
               {"factors", c.mesh.factors},
               {"material", materialName(c.mesh.material)}};
  j["material"] = {
      {"nonlinear", {{"E", c.nonlinear.youngs}, {"nu", c.nonlinear.poisson}, {"c1", c.nonlinear.c1}, {"c2", c.nonlinear.c2}}},
      {"j2", {{"E", c.j2.youngs}, {"nu", c.j2.poisson}, {"H", c.j2.hardening}, {"sigmaY0", c.j2.initialYield}}}};
  const VirtualTestSpec& v = c.dataset.virtualTest;
  j["dataset"] = {{"oracle", c.dataset.oracle},
                  {"scheme", schemeName(c.dataset.scheme)},
                  {"size", c.dataset.size},
                  {"stdDev", c.dataset.stdDev},
                  {"halfWidth", c.dataset.halfWidth},
                  {"noise", c.dataset.noise},
                  {"path", c.dataset.path.string()},
                  {"virtualTest",
                   {{"paths", v.paths},
                    {"stepsPerPath", v.stepsPerPath},
                    {"maxStrain", v.maxStrain},
                    {"strainIncrement", v.strainIncrement},
                    {"minSegmentSteps", v.minSegmentSteps},
                    {"maxSegmentSteps", v.maxSegmentSteps},
                    {"reversalProbability", v.reversalProbability},
                    {"directionJitter", v.directionJitter}}}};
  j["metricModulus"] = c.metricModulus;
  j["solver"] = {{"method", c.solver.method == SolverKind::classical ? "classical" : "extended"},
                 {"tol", c.solver.tol},
                 {"maxIter", c.solver.maxIter},
                 {"clampYieldStress", c.solver.clampYieldStress}};
  j["newton"] = {{"relTol", c.newton.relTol}, {"maxIter", c.newton.maxIter}};
  std::vector<std::string> distributions;
  for (SamplingScheme d : c.study.distributions) distributions.emplace_back(schemeName(d));
  j["study"] = {{"sizes", c.study.sizes},
                {"noiseLevels", c.study.noiseLevels},
                {"distributions", distributions},
                {"replicas", c.study.replicas}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j.dump(2);
}

std::string configHash(const std::string& canonicalJson)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonicalJson) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ddm
