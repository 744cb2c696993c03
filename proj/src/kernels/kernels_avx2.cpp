// AVX2 kernel variants. Each lane computes the same mul/add sequence as the
// scalar reference, so outputs are bit-identical (no FMA contraction).

#include "hoppetree/kernels.hpp"

#ifdef HOPPETREE_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

namespace hoppetree::kernels::detail {

void pb_convolve_step_avx2(double* pmf, std::size_t len, double p) {
  const double q = 1.0 - p;
  pmf[len] = pmf[len - 1] * p;

  const __m256d vq = _mm256_set1_pd(q);
  const __m256d vp = _mm256_set1_pd(p);

  // Update indices len-1 .. 1 descending. A chunk [k-3, k] only reads
  // indices <= k, all still holding pre-update values.
  std::size_t k = len - 1;
  while (k >= 4) {
    const __m256d cur = _mm256_loadu_pd(pmf + k - 3);
    const __m256d prev = _mm256_loadu_pd(pmf + k - 4);
    const __m256d res =
        _mm256_add_pd(_mm256_mul_pd(cur, vq), _mm256_mul_pd(prev, vp));
    _mm256_storeu_pd(pmf + k - 3, res);
    k -= 4;
  }
  while (k >= 1) {
    pmf[k] = pmf[k] * q + pmf[k - 1] * p;
    --k;
  }
  pmf[0] *= q;
}

double sum_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  alignas(32) double bins[4];
  _mm256_store_pd(bins, acc);
  for (; i < n; ++i) {
    bins[i & 3] += std::abs(a[i] - b[i]);
  }
  return (bins[0] + bins[1]) + (bins[2] + bins[3]);
}

void standardize_avx2(const std::int64_t* x, std::size_t n, double center,
                      double inv_scale, double* out) {
  // int64 -> double via the 2^52*1.5 bias trick; exact for |x| < 2^51.
  const __m256i bias_i = _mm256_set1_epi64x(0x4338000000000000LL);
  const __m256d bias_d = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52
  const __m256d vcenter = _mm256_set1_pd(center);
  const __m256d vscale = _mm256_set1_pd(inv_scale);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i xi = _mm256_add_epi64(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i)), bias_i);
    const __m256d xd = _mm256_sub_pd(_mm256_castsi256_pd(xi), bias_d);
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_sub_pd(xd, vcenter), vscale));
  }
  for (; i < n; ++i) {
    out[i] = (static_cast<double>(x[i]) - center) * inv_scale;
  }
}

}  // namespace hoppetree::kernels::detail

#endif  // HOPPETREE_HAVE_AVX2
