// Compiled with -mavx2 only; reached through the dispatcher after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "gridfill/simd/kernels.hpp"

namespace gridfill::simd::avx2 {

namespace {

double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return std::max(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

double sweep(const SweepProblem& pr, std::span<const double> prev, std::span<double> next) {
  const std::ptrdiff_t padded_width = pr.width + 2;
  const std::size_t plane = static_cast<std::size_t>(pr.height) * static_cast<std::size_t>(pr.width);
  const std::size_t n_off = pr.offsets.size();
  const double* src = prev.data();
  double* dst = next.data();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d vmax = zero;
  double max_delta = 0.0;

  for (int h = 0; h < pr.height; ++h) {
    const std::size_t row = static_cast<std::size_t>(h) * pr.width;
    const std::ptrdiff_t prow = (h + 1) * padded_width + 1;
    int w = 0;
    for (; w + 4 <= pr.width; w += 4) {
      const std::size_t i = row + w;
      const std::ptrdiff_t p = prow + w;
      __m256d acc = zero;
      for (std::size_t k = 0; k < n_off; ++k) {
        const __m256d wt = _mm256_loadu_pd(pr.weights.data() + k * plane + i);
        const __m256d nv = _mm256_loadu_pd(src + p + pr.offsets[k]);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(wt, nv));
      }
      const __m256d v = _mm256_div_pd(acc, _mm256_loadu_pd(pr.divisor.data() + i));
      const __m256d old = _mm256_loadu_pd(src + p);
      const __m256d upd = _mm256_cmp_pd(_mm256_loadu_pd(pr.update.data() + i), zero, _CMP_NEQ_OQ);
      const __m256d out = _mm256_blendv_pd(old, v, upd);
      _mm256_storeu_pd(dst + p, out);
      vmax = _mm256_max_pd(vmax, _mm256_and_pd(_mm256_sub_pd(out, old), abs_mask));
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
  return std::max(max_delta, hmax(vmax));
}

IdwSums idw_sums(double qh, double qw, std::span<const double> src_h,
                 std::span<const double> src_w, std::span<const double> src_v, double power) {
  // Only the common powers have a cheap vector form; pow() stays scalar.
  if (power != 1.0 && power != 2.0) {
    return scalar::idw_sums(qh, qw, src_h, src_w, src_v, power);
  }
  const bool square = power == 2.0;
  const std::size_t n = src_v.size();
  const __m256d vqh = _mm256_set1_pd(qh);
  const __m256d vqw = _mm256_set1_pd(qw);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d sw = _mm256_setzero_pd();
  __m256d swv = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dh = _mm256_sub_pd(vqh, _mm256_loadu_pd(src_h.data() + j));
    const __m256d dw = _mm256_sub_pd(vqw, _mm256_loadu_pd(src_w.data() + j));
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dh, dh), _mm256_mul_pd(dw, dw));
    const __m256d wt = _mm256_div_pd(one, square ? d2 : _mm256_sqrt_pd(d2));
    sw = _mm256_add_pd(sw, wt);
    swv = _mm256_add_pd(swv, _mm256_mul_pd(wt, _mm256_loadu_pd(src_v.data() + j)));
  }
  IdwSums tail = scalar::idw_sums(qh, qw, src_h.subspan(j), src_w.subspan(j), src_v.subspan(j), power);
  return {hsum(sw) + tail.weight, hsum(swv) + tail.weighted_value};
}

}  // namespace gridfill::simd::avx2
