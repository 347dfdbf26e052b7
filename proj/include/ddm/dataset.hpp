#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ddm/constitutive.hpp"
#include "ddm/tensor.hpp"

namespace ddm {

enum class Subset : std::uint8_t { elastic, inelastic };

std::string_view subsetName(Subset s);
/// Throws ParameterError for anything but "elastic" / "inelastic".
Subset parseSubset(std::string_view name);

/// One extended data point: (strain, stress) plus the tangent stiffness at that state.
struct DataPoint
{
  SymTensor strain;
  SymTensor stress;
  TangentMatrix tangent;
  Subset label = Subset::elastic;
};

/**
 * A material dataset with the modulus used to metricize phase space.
 * The elastic and inelastic index lists partition the points.
 */
class LabeledDataSet
{
 public:
  LabeledDataSet() = default;
  /// Throws ParameterError unless metricModulus > 0.
  LabeledDataSet(std::vector<DataPoint> points, double metricModulus);

  const std::vector<DataPoint>& points() const { return points_; }
  const DataPoint& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double metricModulus() const { return metricModulus_; }

  /// Ascending indices of the points carrying `label`.
  std::vector<std::size_t> indices(Subset label) const;
  std::size_t count(Subset label) const;

  double maxAbsStrain() const;
  double maxAbsStress() const;
  double maxAbsTangent() const;

 private:
  std::vector<DataPoint> points_;
  double metricModulus_ = 1.0;
};

enum class SamplingScheme { normalGrid, uniformGrid, randomNormal, randomUniform };

std::string_view schemeName(SamplingScheme s);
/// Throws ParameterError for an unknown scheme name.
SamplingScheme parseScheme(std::string_view name);

/**
 * Strain sampling over the in-plane components (xx, yy, xy); eps_zz = 0.
 * Grid schemes take `count` per axis (count^3 points); random schemes take
 * the total count. The xy axis is the tensor component eps_xy.
 */
struct SamplingSpec
{
  SamplingScheme scheme = SamplingScheme::randomNormal;
  std::size_t count = 4096;
  double stdDev = 0.01;      // normal schemes
  double halfWidth = 0.02;   // uniform schemes: [-halfWidth, halfWidth]
  std::uint64_t seed = 1;
};

/// Samples strains per `spec` and evaluates stress and tangent with the oracle; all labels elastic.
LabeledDataSet sampleDataset(const ElasticOracle& oracle, const SamplingSpec& spec, double metricModulus);

/**
 * Adds zero-mean uniform noise: strain and stress components by
 * level * (max |component| over the set) of the respective quantity,
 * tangent entries by level * max |C_ij|, then re-symmetrizes the tangent.
 * eps_zz stays zero. Throws EmptyDataError on an empty set.
 */
LabeledDataSet addNoise(const LabeledDataSet& ds, double level, std::uint64_t seed);

/// Text format, one record per line in engineering Voigt; `.gz` paths are gzip-compressed.
void saveDataset(const LabeledDataSet& ds, const std::filesystem::path& path);
LabeledDataSet loadDataset(const std::filesystem::path& path);
void writeDataset(const LabeledDataSet& ds, std::ostream& out);
LabeledDataSet parseDataset(std::istream& in, const std::string& sourceName = "<dataset>");

inline constexpr std::string_view kDatasetMagic = "#ddmech-dataset";
inline constexpr int kDatasetSchemaVersion = 1;

}  // namespace ddm
