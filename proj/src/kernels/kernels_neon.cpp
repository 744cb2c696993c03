// NEON kernel variants (aarch64). Same mul/add sequences as the scalar
// reference; no fused multiply-add, so outputs are bit-identical.

#include "hoppetree/kernels.hpp"

#ifdef HOPPETREE_HAVE_NEON

#include <arm_neon.h>

#include <cmath>

namespace hoppetree::kernels::detail {

void pb_convolve_step_neon(double* pmf, std::size_t len, double p) {
  const double q = 1.0 - p;
  pmf[len] = pmf[len - 1] * p;

  const float64x2_t vq = vdupq_n_f64(q);
  const float64x2_t vp = vdupq_n_f64(p);

  std::size_t k = len - 1;
  while (k >= 2) {
    const float64x2_t cur = vld1q_f64(pmf + k - 1);
    const float64x2_t prev = vld1q_f64(pmf + k - 2);
    vst1q_f64(pmf + k - 1, vaddq_f64(vmulq_f64(cur, vq), vmulq_f64(prev, vp)));
    k -= 2;
  }
  while (k >= 1) {
    pmf[k] = pmf[k] * q + pmf[k - 1] * p;
    --k;
  }
  pmf[0] *= q;
}

double sum_abs_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vabsq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i))));
    acc23 = vaddq_f64(acc23, vabsq_f64(vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2))));
  }
  double bins[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1),
                    vgetq_lane_f64(acc23, 0), vgetq_lane_f64(acc23, 1)};
  for (; i < n; ++i) {
    bins[i & 3] += std::abs(a[i] - b[i]);
  }
  return (bins[0] + bins[1]) + (bins[2] + bins[3]);
}

void standardize_neon(const std::int64_t* x, std::size_t n, double center,
                      double inv_scale, double* out) {
  const float64x2_t vcenter = vdupq_n_f64(center);
  const float64x2_t vscale = vdupq_n_f64(inv_scale);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xd = vcvtq_f64_s64(vld1q_s64(x + i));
    vst1q_f64(out + i, vmulq_f64(vsubq_f64(xd, vcenter), vscale));
  }
  for (; i < n; ++i) {
    out[i] = (static_cast<double>(x[i]) - center) * inv_scale;
  }
}

}  // namespace hoppetree::kernels::detail

#endif  // HOPPETREE_HAVE_NEON
