#include "ddm/nn_index.hpp"

#include <algorithm>
#include <limits>

#include "ddm/errors.hpp"

namespace ddm {

PhaseMetric::PhaseMetric(double modulus) : modulus_(modulus)
{
  if (!(modulus > 0.0)) throw ParameterError("metric modulus must be positive");
}

double localDistance(const MechState& z, const MechState& zHat, const PhaseMetric& m)
{
  // Same operation order as the scan kernels.
  double de = 0.0;
  double ds = 0.0;
  for (int c = 0; c < 4; ++c) {
    const double d = zHat.strain[c] - z.strain[c];
    de = c == 0 ? d * d : de + d * d;
  }
  for (int c = 0; c < 4; ++c) {
    const double d = zHat.stress[c] - z.stress[c];
    ds = c == 0 ? d * d : ds + d * d;
  }
  const auto w = m.weights();
  return w.halfE * de + w.halfInvE * ds;
}

double globalDistance(std::span<const MechState> z, std::span<const MechState> zHat, std::span<const double> weights,
                      const PhaseMetric& m)
{
  if (z.size() != zHat.size() || z.size() != weights.size()) {
    throw ParameterError("globalDistance: state and weight counts differ");
  }
  double sum = 0.0;
  for (std::size_t e = 0; e < z.size(); ++e) sum += weights[e] * localDistance(z[e], zHat[e], m);
  return sum;
}

simd::PhaseQuery toQuery(const MechState& z)
{
  return {z.strain[0], z.strain[1], z.strain[2], z.strain[3], z.stress[0], z.stress[1], z.stress[2], z.stress[3]};
}

simd::PhaseColumns DataView::Columns::view() const
{
  simd::PhaseColumns v;
  for (int c = 0; c < 8; ++c) v.column[c] = data[c].data();
  v.size = data[0].size();
  return v;
}

namespace {

double coordinate(const DataPoint& p, int c) { return c < 4 ? p.strain[c] : p.stress[c - 4]; }

}  // namespace

DataView::DataView(const LabeledDataSet& ds, std::vector<std::size_t> members, const PhaseMetric& metric,
                   std::size_t leafSize)
    : ds_(&ds), members_(std::move(members)), metric_(metric), leafSize_(std::max<std::size_t>(leafSize, 1))
{
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (std::size_t idx : members_) {
    if (idx >= ds.size()) throw ParameterError("data view member out of range");
  }
  for (int c = 0; c < 8; ++c) {
    memberColumns_.data[c].reserve(members_.size());
    for (std::size_t idx : members_) memberColumns_.data[c].push_back(coordinate(ds[idx], c));
  }
  if (members_.empty()) return;

  std::vector<std::size_t> order = members_;
  nodes_.reserve(2 * (members_.size() / leafSize_ + 1));
  build(order, 0, order.size());
  treeIndex_ = order;
  for (int c = 0; c < 8; ++c) {
    treeColumns_.data[c].reserve(order.size());
    for (std::size_t idx : order) treeColumns_.data[c].push_back(coordinate(ds[idx], c));
  }
}

DataView DataView::all(const LabeledDataSet& ds, const PhaseMetric& metric)
{
  std::vector<std::size_t> idx(ds.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return DataView(ds, std::move(idx), metric);
}

DataView DataView::subset(const LabeledDataSet& ds, Subset label, const PhaseMetric& metric)
{
  return DataView(ds, ds.indices(label), metric);
}

bool DataView::contains(std::size_t index) const { return std::binary_search(members_.begin(), members_.end(), index); }

std::size_t DataView::build(std::vector<std::size_t>& order, std::size_t begin, std::size_t end)
{
  const std::size_t id = nodes_.size();
  nodes_.push_back({-1, 0.0, begin, end, 0, 0});
  if (end - begin <= leafSize_) {
    // Ascending dataset indices inside a leaf make the kernel's first-minimum rule the lowest-index rule.
    std::sort(order.begin() + static_cast<long>(begin), order.begin() + static_cast<long>(end));
    return id;
  }

  const auto w = metric_.weights();
  int bestDim = 0;
  double bestSpread = -1.0;
  for (int c = 0; c < 8; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = coordinate((*ds_)[order[i]], c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double spread = (hi - lo) * (hi - lo) * (c < 4 ? w.halfE : w.halfInvE);
    if (spread > bestSpread) {
      bestSpread = spread;
      bestDim = c;
    }
  }
  if (bestSpread <= 0.0) {
    // All points coincide; a leaf of any size is exact.
    std::sort(order.begin() + static_cast<long>(begin), order.begin() + static_cast<long>(end));
    return id;
  }

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order.begin() + static_cast<long>(begin), order.begin() + static_cast<long>(mid),
                   order.begin() + static_cast<long>(end), [&](std::size_t a, std::size_t b) {
                     return coordinate((*ds_)[a], bestDim) < coordinate((*ds_)[b], bestDim);
                   });
  const double split = coordinate((*ds_)[order[mid]], bestDim);
  const std::size_t left = build(order, begin, mid);
  const std::size_t right = build(order, mid, end);
  nodes_[id].dim = bestDim;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void DataView::search(std::size_t nodeId, const simd::PhaseQuery& q, NearestResult& best) const
{
  const Node& node = nodes_[nodeId];
  if (node.dim < 0) {
    const simd::ScanResult r = simd::scanNearest(treeColumns_.view(), node.begin, node.end, q, metric_.weights());
    if (r.position >= node.end) return;
    const std::size_t idx = treeIndex_[r.position];
    if (r.distance < best.distance || (r.distance == best.distance && idx < best.index)) best = {idx, r.distance};
    return;
  }
  const double diff = q[node.dim] - node.split;
  const std::size_t nearChild = diff < 0.0 ? node.left : node.right;
  const std::size_t farChild = diff < 0.0 ? node.right : node.left;
  search(nearChild, q, best);
  const auto w = metric_.weights();
  const double bound = (node.dim < 4 ? w.halfE : w.halfInvE) * diff * diff;
  // Rounding margin keeps pruning conservative; equal distances are still visited for the tie rule.
  if (bound * (1.0 - 1e-12) <= best.distance) search(farChild, q, best);
}

NearestResult DataView::nearest(const MechState& z) const
{
  if (members_.empty()) throw EmptyDataError("nearest-neighbour query on an empty data view");
  NearestResult best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
  search(0, toQuery(z), best);
  return best;
}

NearestResult DataView::nearestBruteForce(const MechState& z) const
{
  if (members_.empty()) throw EmptyDataError("nearest-neighbour query on an empty data view");
  const simd::ScanResult r =
      simd::scanNearest(memberColumns_.view(), 0, members_.size(), toQuery(z), metric_.weights());
  return {members_[r.position], r.distance};
}

}  // namespace ddm
