#include "gridfill/idw.hpp"

#include <algorithm>
#include <cmath>

#include "gridfill/error.hpp"

namespace gridfill {

std::vector<double> idw_weights(Cell query, std::span<const Cell> sources, double power) {
  if (!(power > 0.0)) throw InvalidArgument("IDW power must be positive");
  std::vector<double> w(sources.size());
  double total = 0.0;
  for (std::size_t j = 0; j < sources.size(); ++j) {
    const double dh = query.h - sources[j].h;
    const double dw = query.w - sources[j].w;
    const double d = std::sqrt(dh * dh + dw * dw);
    if (d == 0.0) throw InvalidArgument("IDW source coincides with the query cell");
    w[j] = 1.0 / std::pow(d, power);
    total += w[j];
  }
  for (double& v : w) v /= total;
  return w;
}

Grid idw(const Grid& observed, double power, std::optional<simd::Backend> backend) {
  if (!(power > 0.0)) throw InvalidArgument("IDW power must be positive");
  std::vector<double> src_h, src_w, src_v;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!observed.observed(i)) continue;
    const Cell c = observed.cell(i);
    src_h.push_back(c.h);
    src_w.push_back(c.w);
    src_v.push_back(observed.value(i));
  }
  if (src_v.empty()) throw InvalidArgument("IDW needs at least one observed cell");
  const auto [lo, hi] = std::minmax_element(src_v.begin(), src_v.end());

  const auto& k = backend ? simd::kernels(*backend) : simd::kernels();
  Grid out = observed;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed.observed(i)) continue;
    const Cell c = observed.cell(i);
    const simd::IdwSums s = k.idw_sums(c.h, c.w, src_h, src_w, src_v, power);
    // A convex combination; the clamp only removes rounding overshoot.
    out.set(c, std::clamp(s.weighted_value / s.weight, *lo, *hi));
  }
  return out;
}

}  // namespace gridfill
