#include <atomic>
#include <stdexcept>

#include "ddm/simd/phase_scan.hpp"

namespace ddm::simd {

namespace {

Isa detectIsa()
{
#if defined(DDM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<int>& forcedIsa()
{
  static std::atomic<int> forced{-1};
  return forced;
}

}  // namespace

std::string_view isaName(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isaAvailable(Isa isa)
{
  if (isa == Isa::scalar) return true;
  static const Isa detected = detectIsa();
  return detected == Isa::avx2;
}

Isa activeIsa()
{
  static const Isa detected = detectIsa();
  const int forced = forcedIsa().load(std::memory_order_relaxed);
  return forced < 0 ? detected : static_cast<Isa>(forced);
}

void forceIsa(std::optional<Isa> isa)
{
  if (isa && !isaAvailable(*isa)) throw std::invalid_argument("SIMD variant not available on this CPU");
  forcedIsa().store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

ScanResult scanNearest(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q,
                       MetricWeights w)
{
#if defined(DDM_HAVE_AVX2)
  if (activeIsa() == Isa::avx2) return avx2::scanNearest(cols, begin, end, q, w);
#endif
  return scalar::scanNearest(cols, begin, end, q, w);
}

void distances(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q, MetricWeights w,
               std::span<double> out)
{
#if defined(DDM_HAVE_AVX2)
  if (activeIsa() == Isa::avx2) return avx2::distances(cols, begin, end, q, w, out);
#endif
  scalar::distances(cols, begin, end, q, w, out);
}

}  // namespace ddm::simd
