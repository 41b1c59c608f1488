#include <algorithm>
#include <cmath>

#include "gridfill/simd/kernels.hpp"

namespace gridfill::simd::scalar {

double sweep(const SweepProblem& pr, std::span<const double> prev, std::span<double> next) {
  const std::ptrdiff_t padded_width = pr.width + 2;
  const std::size_t plane = static_cast<std::size_t>(pr.height) * static_cast<std::size_t>(pr.width);
  double max_delta = 0.0;

  for (int h = 0; h < pr.height; ++h) {
    for (int w = 0; w < pr.width; ++w) {
      const std::size_t i = static_cast<std::size_t>(h) * pr.width + w;
      const std::ptrdiff_t p = (h + 1) * padded_width + (w + 1);
      if (pr.update[i] == 0.0) {
        next[p] = prev[p];
        continue;
      }
      double acc = 0.0;
      for (std::size_t k = 0; k < pr.offsets.size(); ++k) {
        acc += pr.weights[k * plane + i] * prev[p + pr.offsets[k]];
      }
      const double v = acc / pr.divisor[i];
      next[p] = v;
      max_delta = std::max(max_delta, std::abs(v - prev[p]));
    }
  }
  return max_delta;
}

IdwSums idw_sums(double qh, double qw, std::span<const double> src_h,
                 std::span<const double> src_w, std::span<const double> src_v, double power) {
  IdwSums s;
  const double half_power = 0.5 * power;
  for (std::size_t j = 0; j < src_v.size(); ++j) {
    const double dh = qh - src_h[j];
    const double dw = qw - src_w[j];
    const double wt = 1.0 / std::pow(dh * dh + dw * dw, half_power);
    s.weight += wt;
    s.weighted_value += wt * src_v[j];
  }
  return s;
}

}  // namespace gridfill::simd::scalar
