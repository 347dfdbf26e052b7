// Compiled with -mavx2 only (no FMA) so lane arithmetic rounds exactly like the scalar variant.
#include <immintrin.h>

#include "ddm/simd/phase_scan.hpp"

namespace ddm::simd::avx2 {

namespace {

inline __m256d squaredDiffSum(const PhaseColumns& cols, int first, std::size_t i, const __m256d* qv)
{
  __m256d d = _mm256_sub_pd(_mm256_loadu_pd(cols.column[first] + i), qv[first]);
  __m256d acc = _mm256_mul_pd(d, d);
  for (int c = first + 1; c < first + 4; ++c) {
    d = _mm256_sub_pd(_mm256_loadu_pd(cols.column[c] + i), qv[c]);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  return acc;
}

inline __m256d blockDistance(const PhaseColumns& cols, std::size_t i, const __m256d* qv, __m256d halfE,
                             __m256d halfInvE)
{
  const __m256d de = squaredDiffSum(cols, 0, i, qv);
  const __m256d ds = squaredDiffSum(cols, 4, i, qv);
  return _mm256_add_pd(_mm256_mul_pd(halfE, de), _mm256_mul_pd(halfInvE, ds));
}

}  // namespace

ScanResult scanNearest(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q,
                       MetricWeights w)
{
  __m256d qv[8];
  for (int c = 0; c < 8; ++c) qv[c] = _mm256_set1_pd(q[c]);
  const __m256d halfE = _mm256_set1_pd(w.halfE);
  const __m256d halfInvE = _mm256_set1_pd(w.halfInvE);

  __m256d bestD = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d bestPos = _mm256_set1_pd(-1.0);
  __m256d pos = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d four = _mm256_set1_pd(4.0);
  pos = _mm256_add_pd(pos, _mm256_set1_pd(static_cast<double>(begin)));

  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    const __m256d d = blockDistance(cols, i, qv, halfE, halfInvE);
    const __m256d better = _mm256_cmp_pd(d, bestD, _CMP_LT_OQ);
    bestD = _mm256_blendv_pd(bestD, d, better);
    bestPos = _mm256_blendv_pd(bestPos, pos, better);
    pos = _mm256_add_pd(pos, four);
  }

  alignas(32) double laneD[4];
  alignas(32) double lanePos[4];
  _mm256_store_pd(laneD, bestD);
  _mm256_store_pd(lanePos, bestPos);
  ScanResult best;
  for (int l = 0; l < 4; ++l) {
    if (lanePos[l] < 0.0) continue;
    const auto p = static_cast<std::size_t>(lanePos[l]);
    if (laneD[l] < best.distance || (laneD[l] == best.distance && p < best.position)) best = {p, laneD[l]};
  }
  // Tail positions exceed every lane position, so a strict comparison keeps the tie rule.
  if (i < end) {
    const ScanResult tail = scalar::scanNearest(cols, i, end, q, w);
    if (tail.distance < best.distance) best = tail;
  }
  return best;
}

void distances(const PhaseColumns& cols, std::size_t begin, std::size_t end, const PhaseQuery& q, MetricWeights w,
               std::span<double> out)
{
  __m256d qv[8];
  for (int c = 0; c < 8; ++c) qv[c] = _mm256_set1_pd(q[c]);
  const __m256d halfE = _mm256_set1_pd(w.halfE);
  const __m256d halfInvE = _mm256_set1_pd(w.halfInvE);
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    _mm256_storeu_pd(out.data() + (i - begin), blockDistance(cols, i, qv, halfE, halfInvE));
  }
  if (i < end) scalar::distances(cols, i, end, q, w, out.subspan(i - begin));
}

}  // namespace ddm::simd::avx2
