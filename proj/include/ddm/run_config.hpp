#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ddm/constitutive.hpp"
#include "ddm/dataset.hpp"
#include "ddm/fem.hpp"
#include "ddm/oracles.hpp"

namespace ddm {

enum class ProblemKind { tube, plateHole, mesh };
enum class MaterialKind { nonlinearElastic, j2 };
enum class SolverKind { extended, classical };

struct TubeConfig
{
  double r1 = 1.0;
  double r2 = 2.0;
  int nRadial = 5;
  int nCirc = 20;
  double tMax = 0.1;   // final value of the normalized time
  int steps = 100;     // steps t_k = k tMax / steps, k = 1..steps
};

struct PlateConfig
{
  double length = 1.0;
  double height = 0.2;
  double radius = 0.05;
  int refinement = 5;
  std::vector<double> peaks{1.8e7, 0.0, 2.0e7};  // traction turning points after the initial 0
  int stepsPerSegment = 10;
};

struct MeshLoadConfig
{
  std::string edge;
  std::string kind = "pressure";  // pressure | traction
  double pressure = 1.0;
  std::array<double, 2> traction{0.0, 0.0};
};

struct MeshProblemConfig
{
  std::filesystem::path path;
  std::vector<DirichletSpec> dirichlet;
  MeshLoadConfig load;
  std::vector<double> factors;
  MaterialKind material = MaterialKind::nonlinearElastic;
};

struct DatasetConfig
{
  std::string oracle = "nonlinear";  // elastic sampling oracle: linear | nonlinear
  SamplingScheme scheme = SamplingScheme::randomNormal;
  /// Per-axis size for elastic sampling (random schemes draw size^3 points); total count for the virtual test.
  std::size_t size = 16;
  double stdDev = 0.01;
  double halfWidth = 0.02;
  double noise = 0.0;
  VirtualTestSpec virtualTest;
  std::filesystem::path path;  // load instead of sampling when set
};

struct SolverConfig
{
  SolverKind method = SolverKind::extended;
  double tol = -1.0;  // negative: defaultTolerance
  int maxIter = 100;
  bool clampYieldStress = true;
};

struct StudyConfig
{
  std::vector<std::size_t> sizes{8, 16, 32};
  std::vector<double> noiseLevels{0.0, 0.01, 0.02, 0.05, 0.1};
  std::vector<SamplingScheme> distributions{SamplingScheme::randomNormal, SamplingScheme::randomUniform};
  std::size_t replicas = 10;
};

struct RunConfig
{
  ProblemKind problem = ProblemKind::tube;
  TubeConfig tube;
  PlateConfig plate;
  MeshProblemConfig mesh;
  NonlinearElasticParams nonlinear;
  J2Params j2;
  DatasetConfig dataset;
  double metricModulus = 0.0;  // 0: Young's modulus of the problem's material
  SolverConfig solver;
  NewtonOptions newton;
  StudyConfig study;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  MaterialKind material() const;
  double effectiveMetricModulus() const;
  /// Throws ParameterError on violated invariants or missing files.
  void validate() const;
};

/// Defaults for a problem: the tube uses the nonlinear elastic material, the plate the J2 material.
RunConfig defaultConfig(ProblemKind problem);

/// Strict JSON reading: unknown keys are ParameterErrors. Missing keys keep the defaults.
RunConfig parseRunConfig(const std::string& json);
RunConfig loadRunConfig(const std::filesystem::path& path);
std::string toJson(const RunConfig& config);

std::string_view problemName(ProblemKind p);
ProblemKind parseProblem(std::string_view name);

/// 64-bit FNV-1a of a string, printed as 16 hex digits.
std::string configHash(const std::string& canonicalJson);

}  // namespace ddm
