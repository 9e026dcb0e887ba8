// Compiled with -mavx2 -mpopcnt; only reached after a runtime CPU check.
#include <immintrin.h>

#include "kernels_internal.hpp"

namespace techconv::kernels::detail {
namespace {

// Nibble-lookup population count (Mula, Kurz, Lemire), reduced per 64-bit lane
// with SAD against zero.
inline __m256i popcount_bytes_lanes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1,
                                          1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts =
      _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_u64(__m256i acc) {
  alignas(32) std::uint64_t lane[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lane), acc);
  return lane[0] + lane[1] + lane[2] + lane[3];
}

std::uint64_t popcount_avx2(const std::uint64_t* a, std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    acc = _mm256_add_epi64(acc, popcount_bytes_lanes(v));
  }
  std::uint64_t total = horizontal_u64(acc);
  for (; i < words; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i]));
  return total;
}

std::uint64_t and_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = _mm256_add_epi64(acc, popcount_bytes_lanes(_mm256_and_si256(va, vb)));
  }
  std::uint64_t total = horizontal_u64(acc);
  for (; i < words; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & b[i]));
  return total;
}

// Tail elements go to lanes 0.. in order, then (l0 + l1) + (l2 + l3), exactly
// as the scalar reference does.
inline double finish(__m256d acc, std::size_t tail, auto&& term) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t k = 0; k < tail; ++k) lane[k] += term(k);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  const double* rest = a + i;
  return finish(acc, n - i, [rest](std::size_t k) { return rest[k]; });
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  const double* ra = a + i;
  const double* rb = b + i;
  return finish(acc, n - i, [ra, rb](std::size_t k) { return ra[k] * rb[k]; });
}

double ssr_avx2(const double* x, const double* y, std::size_t n, double intercept, double slope) {
  const __m256d vi = _mm256_set1_pd(intercept);
  const __m256d vs = _mm256_set1_pd(slope);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d fit = _mm256_add_pd(vi, _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(y + i), fit);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(r, r));
  }
  const double* rx = x + i;
  const double* ry = y + i;
  return finish(acc, n - i, [=](std::size_t k) {
    const double fit = slope * rx[k];
    const double r = ry[k] - (intercept + fit);
    return r * r;
  });
}

}  // namespace

const KernelTable kAvx2Table{Isa::avx2, popcount_avx2, and_popcount_avx2,
                             sum_avx2,  dot_avx2,      ssr_avx2};

}  // namespace techconv::kernels::detail
