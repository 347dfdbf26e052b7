#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

namespace ddm::simd {

/// Read-only structure-of-arrays view: columns 0..3 strain, 4..7 stress (Mandel).
struct PhaseColumns
{
  std::array<const double*, 8> column{};
  std::size_t size = 0;
};

using PhaseQuery = std::array<double, 8>;

/// Weights of the quadratic metric: halfE * |d eps|^2 + halfInvE * |d sigma|^2.
struct MetricWeights
{
  double halfE;
  double halfInvE;
};

struct ScanResult
{
  std::size_t position = std::numeric_limits<std::size_t>::max();
  double distance = std::numeric_limits<double>::infinity();
};

enum class Isa { scalar, avx2 };

std::string_view isaName(Isa isa);
bool isaAvailable(Isa isa);
/// The variant used by the dispatching entry points.
Isa activeIsa();
/// Pins dispatch to `isa` (must be available); std::nullopt restores auto-detection.
void forceIsa(std::optional<Isa> isa);

/**
 * Position of the minimum distance over [begin, end). Ties resolve to the
 * lowest position. Every variant evaluates the distance with the same
 * operation order, so results are bit-identical across variants:
 *   de = ((d0*d0 + d1*d1) + d2*d2) + d3*d3   (strain columns)
 *   ds likewise for the stress columns
 *   d  = halfE*de + halfInvE*ds
 */
ScanResult scanNearest(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q,
                       MetricWeights w);
/// out[i - begin] = distance of position i.
void distances(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q, MetricWeights w,
               std::span<double> out);

namespace scalar {
ScanResult scanNearest(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q,
                       MetricWeights w);
void distances(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q, MetricWeights w,
               std::span<double> out);
}  // namespace scalar

#if defined(DDM_HAVE_AVX2)
namespace avx2 {
ScanResult scanNearest(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q,
                       MetricWeights w);
void distances(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q, MetricWeights w,
               std::span<double> out);
}  // namespace avx2
#endif

}  // namespace ddm::simd
