#include "ddm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/normal.hpp>

#include "ddm/errors.hpp"

namespace ddm {

std::string_view subsetName(Subset s) { return s == Subset::elastic ? "elastic" : "inelastic"; }

Subset parseSubset(std::string_view name)
{
  if (name == "elastic") return Subset::elastic;
  if (name == "inelastic") return Subset::inelastic;
  throw ParameterError("unknown subset label '" + std::string(name) + "'");
}

LabeledDataSet::LabeledDataSet(std::vector<DataPoint> points, double metricModulus)
    : points_(std::move(points)), metricModulus_(metricModulus)
{
  if (!(metricModulus_ > 0.0)) throw ParameterError("metric modulus must be positive");
}

std::vector<std::size_t> LabeledDataSet::indices(Subset label) const
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].label == label) out.push_back(i);
  }
  return out;
}

std::size_t LabeledDataSet::count(Subset label) const
{
  return static_cast<std::size_t>(
      std::count_if(points_.begin(), points_.end(), [label](const DataPoint& p) { return p.label == label; }));
}

double LabeledDataSet::maxAbsStrain() const
{
  double m = 0.0;
  for (const auto& p : points_) m = std::max(m, p.strain.mandel().cwiseAbs().maxCoeff());
  return m;
}

double LabeledDataSet::maxAbsStress() const
{
  double m = 0.0;
  for (const auto& p : points_) m = std::max(m, p.stress.mandel().cwiseAbs().maxCoeff());
  return m;
}

double LabeledDataSet::maxAbsTangent() const
{
  double m = 0.0;
  for (const auto& p : points_) m = std::max(m, p.tangent.maxAbs());
  return m;
}

std::string_view schemeName(SamplingScheme s)
{
  switch (s) {
    case SamplingScheme::normalGrid: return "normalGrid";
    case SamplingScheme::uniformGrid: return "uniformGrid";
    case SamplingScheme::randomNormal: return "randomNormal";
    case SamplingScheme::randomUniform: return "randomUniform";
  }
  return "?";
}

SamplingScheme parseScheme(std::string_view name)
{
  for (auto s : {SamplingScheme::normalGrid, SamplingScheme::uniformGrid, SamplingScheme::randomNormal,
                 SamplingScheme::randomUniform}) {
    if (schemeName(s) == name) return s;
  }
  throw ParameterError("unknown sampling scheme '" + std::string(name) + "'");
}

namespace {

std::vector<double> gridAxis(const SamplingSpec& spec)
{
  const std::size_t n = spec.count;
  std::vector<double> axis(n);
  if (spec.scheme == SamplingScheme::normalGrid) {
    const boost::math::normal_distribution<double> normal(0.0, spec.stdDev);
    for (std::size_t i = 0; i < n; ++i) {
      axis[i] = boost::math::quantile(normal, (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      axis[i] = n == 1 ? 0.0 : -spec.halfWidth + 2.0 * spec.halfWidth * static_cast<double>(i) / (n - 1.0);
    }
  }
  return axis;
}

SymTensor inPlaneStrain(double xx, double yy, double xy) { return {xx, yy, 0.0, kSqrt2 * xy}; }

}  // namespace

LabeledDataSet sampleDataset(const ElasticOracle& oracle, const SamplingSpec& spec, double metricModulus)
{
  if (spec.count < 1) throw ParameterError("dataset size must be >= 1");
  std::vector<SymTensor> strains;
  switch (spec.scheme) {
    case SamplingScheme::normalGrid:
    case SamplingScheme::uniformGrid: {
      const auto axis = gridAxis(spec);
      strains.reserve(axis.size() * axis.size() * axis.size());
      for (double xx : axis) {
        for (double yy : axis) {
          for (double xy : axis) strains.push_back(inPlaneStrain(xx, yy, xy));
        }
      }
      break;
    }
    case SamplingScheme::randomNormal: {
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> dist(0.0, spec.stdDev);
      strains.reserve(spec.count);
      for (std::size_t i = 0; i < spec.count; ++i) {
        const double xx = dist(rng);
        const double yy = dist(rng);
        const double xy = dist(rng);
        strains.push_back(inPlaneStrain(xx, yy, xy));
      }
      break;
    }
    case SamplingScheme::randomUniform: {
      std::mt19937_64 rng(spec.seed);
      std::uniform_real_distribution<double> dist(-spec.halfWidth, spec.halfWidth);
      strains.reserve(spec.count);
      for (std::size_t i = 0; i < spec.count; ++i) {
        const double xx = dist(rng);
        const double yy = dist(rng);
        const double xy = dist(rng);
        strains.push_back(inPlaneStrain(xx, yy, xy));
      }
      break;
    }
  }

  std::vector<DataPoint> points;
  points.reserve(strains.size());
  for (const SymTensor& eps : strains) points.push_back({eps, oracle.stress(eps), oracle.tangent(eps), Subset::elastic});
  return LabeledDataSet(std::move(points), metricModulus);
}

LabeledDataSet addNoise(const LabeledDataSet& ds, double level, std::uint64_t seed)
{
  if (ds.empty()) throw EmptyDataError("cannot add noise to an empty dataset");
  if (!(level >= 0.0)) throw ParameterError("noise level must be >= 0");
  if (level == 0.0) return ds;

  const double strainAmp = level * ds.maxAbsStrain();
  const double stressAmp = level * ds.maxAbsStress();
  const double tangentAmp = level * ds.maxAbsTangent();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<DataPoint> points = ds.points();
  for (DataPoint& p : points) {
    for (int c : {0, 1, 3}) p.strain[c] += strainAmp * unit(rng);
    for (int c = 0; c < 4; ++c) p.stress[c] += stressAmp * unit(rng);
    Mat4 dC;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) dC(i, j) = tangentAmp * unit(rng);
    }
    p.tangent = TangentMatrix(Mat4(p.tangent.matrix() + dC)).symmetrized();
  }
  return LabeledDataSet(std::move(points), ds.metricModulus());
}

}  // namespace ddm
