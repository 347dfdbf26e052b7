#include "ddm/simd/phase_scan.hpp"

namespace ddm::simd::scalar {

namespace {

inline double pointDistance(const PhaseColumns& cols, std::size_t i, const PhaseQuery& q, MetricWeights w)
{
  double de = 0.0;
  double ds = 0.0;
  {
    const double d0 = cols.column[0][i] - q[0];
    const double d1 = cols.column[1][i] - q[1];
    const double d2 = cols.column[2][i] - q[2];
    const double d3 = cols.column[3][i] - q[3];
    de = d0 * d0;
    de = de + d1 * d1;
    de = de + d2 * d2;
    de = de + d3 * d3;
  }
  {
    const double d0 = cols.column[4][i] - q[4];
    const double d1 = cols.column[5][i] - q[5];
    const double d2 = cols.column[6][i] - q[6];
    const double d3 = cols.column[7][i] - q[7];
    ds = d0 * d0;
    ds = ds + d1 * d1;
    ds = ds + d2 * d2;
    ds = ds + d3 * d3;
  }
  return w.halfE * de + w.halfInvE * ds;
}

}  // namespace

ScanResult scanNearest(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q,
                       MetricWeights w)
{
  ScanResult best;
  for (std::size_t i = begin; i < end; ++i) {
    const double d = pointDistance(cols, i, q, w);
    if (d < best.distance) best = {i, d};
  }
  return best;
}

void distances(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q, MetricWeights w,
               std::span<double> out)
{
  for (std::size_t i = begin; i < end; ++i) out[i - begin] = pointDistance(cols, i, q, w);
}

}  // namespace ddm::simd::scalar
