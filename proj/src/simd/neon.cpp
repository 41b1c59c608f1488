// AArch64 variant. Two doubles per lane group.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "gridfill/simd/kernels.hpp"

namespace gridfill::simd::neon {

double sweep(const SweepProblem& pr, std::span<const double> prev, std::span<double> next) {
  const std::ptrdiff_t padded_width = pr.width + 2;
  const std::size_t plane = static_cast<std::size_t>(pr.height) * static_cast<std::size_t>(pr.width);
  const std::size_t n_off = pr.offsets.size();
  const double* src = prev.data();
  double* dst = next.data();
  const float64x2_t zero = vdupq_n_f64(0.0);
  float64x2_t vmax = zero;
  double max_delta = 0.0;

  for (int h = 0; h < pr.height; ++h) {
    const std::size_t row = static_cast<std::size_t>(h) * pr.width;
    const std::ptrdiff_t prow = (h + 1) * padded_width + 1;
    int w = 0;
    for (; w + 2 <= pr.width; w += 2) {
      const std::size_t i = row + w;
      const std::ptrdiff_t p = prow + w;
      float64x2_t acc = zero;
      for (std::size_t k = 0; k < n_off; ++k) {
        const float64x2_t wt = vld1q_f64(pr.weights.data() + k * plane + i);
        const float64x2_t nv = vld1q_f64(src + p + pr.offsets[k]);
        acc = vaddq_f64(acc, vmulq_f64(wt, nv));
      }
      const float64x2_t v = vdivq_f64(acc, vld1q_f64(pr.divisor.data() + i));
      const float64x2_t old = vld1q_f64(src + p);
      const uint64x2_t keep = vceqq_f64(vld1q_f64(pr.update.data() + i), zero);
      const float64x2_t out = vbslq_f64(keep, old, v);
      vst1q_f64(dst + p, out);
      vmax = vmaxq_f64(vmax, vabsq_f64(vsubq_f64(out, old)));
    }
    for (; w < pr.width; ++w) {
      const std::size_t i = row + w;
      const std::ptrdiff_t p = prow + w;
      if (pr.update[i] == 0.0) {
        dst[p] = src[p];
        continue;
      }
      double acc = 0.0;
      for (std::size_t k = 0; k < n_off; ++k) acc += pr.weights[k * plane + i] * src[p + pr.offsets[k]];
      const double v = acc / pr.divisor[i];
      dst[p] = v;
      max_delta = std::max(max_delta, std::abs(v - src[p]));
    }
  }
  return std::max(max_delta, vmaxvq_f64(vmax));
}

IdwSums idw_sums(double qh, double qw, std::span<const double> src_h,
                 std::span<const double> src_w, std::span<const double> src_v, double power) {
  if (power != 1.0 && power != 2.0) {
    return scalar::idw_sums(qh, qw, src_h, src_w, src_v, power);
  }
  const bool square = power == 2.0;
  const std::size_t n = src_v.size();
  const float64x2_t vqh = vdupq_n_f64(qh);
  const float64x2_t vqw = vdupq_n_f64(qw);
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t sw = vdupq_n_f64(0.0);
  float64x2_t swv = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t dh = vsubq_f64(vqh, vld1q_f64(src_h.data() + j));
    const float64x2_t dw = vsubq_f64(vqw, vld1q_f64(src_w.data() + j));
    const float64x2_t d2 = vaddq_f64(vmulq_f64(dh, dh), vmulq_f64(dw, dw));
    const float64x2_t wt = vdivq_f64(one, square ? d2 : vsqrtq_f64(d2));
    sw = vaddq_f64(sw, wt);
    swv = vaddq_f64(swv, vmulq_f64(wt, vld1q_f64(src_v.data() + j)));
  }
  IdwSums tail = scalar::idw_sums(qh, qw, src_h.subspan(j), src_w.subspan(j), src_v.subspan(j), power);
  return {vaddvq_f64(sw) + tail.weight, vaddvq_f64(swv) + tail.weighted_value};
}

}  // namespace gridfill::simd::neon
