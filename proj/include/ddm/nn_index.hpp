#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ddm/dataset.hpp"
#include "ddm/simd/phase_scan.hpp"
#include "ddm/tensor.hpp"

namespace ddm {

/// A material point's (strain, stress) pair.
struct MechState
{
  SymTensor strain;
  SymTensor stress;

  friend bool operator==(const MechState&, const MechState&) = default;
};

/// Scaling modulus of the phase-space metric.
class PhaseMetric
{
 public:
  /// Throws ParameterError unless modulus > 0.
  explicit PhaseMetric(double modulus);

  double modulus() const { return modulus_; }
  simd::MetricWeights weights() const { return {0.5 * modulus_, 0.5 / modulus_}; }

 private:
  double modulus_;
};

/// 1/2 E |d eps|^2 + 1/2 E^-1 |d sigma|^2, the squared-norm-like quantity used directly as the distance.
double localDistance(const MechState& z, const MechState& zHat, const PhaseMetric& m);
/// sum_e w_e d_e(z_e, zHat_e); throws ParameterError on length mismatch.
double globalDistance(std::span<const MechState> z, std::span<const MechState> zHat, std::span<const double> weights,
                      const PhaseMetric& m);

simd::PhaseQuery toQuery(const MechState& z);

struct NearestResult
{
  std::size_t index;  // index into the full dataset
  double distance;
};

/**
 * Nearest-neighbour view over a subset of a dataset. Queries go through a
 * k-d tree whose leaves are scanned with the SIMD kernels; pruning is
 * conservative and leaf distances use the exact localDistance arithmetic, so
 * results equal the brute-force scan bit for bit, including the
 * lowest-index tie rule. Immutable after construction; concurrent queries
 * are safe.
 */
class DataView
{
 public:
  DataView(const LabeledDataSet& ds, std::vector<std::size_t> members, const PhaseMetric& metric,
           std::size_t leafSize = 16);
  static DataView all(const LabeledDataSet& ds, const PhaseMetric& metric);
  static DataView subset(const LabeledDataSet& ds, Subset label, const PhaseMetric& metric);

  /// Throws EmptyDataError on an empty view.
  NearestResult nearest(const MechState& z) const;
  /// Linear SIMD scan over all members.
  NearestResult nearestBruteForce(const MechState& z) const;

  const LabeledDataSet& dataset() const { return *ds_; }
  const std::vector<std::size_t>& members() const { return members_; }
  const PhaseMetric& metric() const { return metric_; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }
  bool contains(std::size_t index) const;

 private:
  struct Node
  {
    int dim = -1;  // -1 for a leaf
    double split = 0.0;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t left = 0;
    std::size_t right = 0;
  };

  struct Columns
  {
    std::array<std::vector<double>, 8> data;
    simd::PhaseColumns view() const;
  };

  std::size_t build(std::vector<std::size_t>& order, std::size_t begin, std::size_t end);
  void search(std::size_t node, const simd::PhaseQuery& q, NearestResult& best) const;

  const LabeledDataSet* ds_;
  std::vector<std::size_t> members_;
  PhaseMetric metric_;
  std::size_t leafSize_;
  Columns memberColumns_;
  Columns treeColumns_;
  std::vector<std::size_t> treeIndex_;  // tree position -> dataset index
  std::vector<Node> nodes_;
};

}  // namespace ddm
