#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gridfill/error.hpp"
#include "gridfill/harness.hpp"
#include "gridfill/rng.hpp"

namespace gridfill {

Region synth_region(std::uint64_t seed, int height, int width, int n_features) {
  if (height < 4 || width < 4) {
    throw InvalidArgument("synthetic region needs at least 4 x 4 cells, got " + std::to_string(height) +
                          " x " + std::to_string(width));
  }
  if (n_features < 2) throw InvalidArgument("synthetic region needs at least 2 features");

  Rng rng(seed);
  struct Mode {
    double fh, fw, amplitude, phase;
  };
  // Cycles across the region per axis.
  Mode modes[] = {{0.5, 1.0, 1.0, 0.0}, {1.0, 0.5, 0.7, 0.0}, {1.0, 1.0, 0.5, 0.0}};
  for (auto& m : modes) m.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

  const std::size_t n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  std::vector<double> smooth(n);
  for (int h = 0; h < height; ++h) {
    for (int w = 0; w < width; ++w) {
      double v = 10.0;
      for (const auto& m : modes) {
        v += m.amplitude * std::sin(2.0 * std::numbers::pi * (m.fh * h / height + m.fw * w / width) + m.phase);
      }
      smooth[static_cast<std::size_t>(h * width + w)] = v;
    }
  }
  const auto [lo, hi] = std::minmax_element(smooth.begin(), smooth.end());
  const double noise_sd = 0.05 * (*hi - *lo);
  std::vector<double> field(n);
  for (std::size_t i = 0; i < n; ++i) field[i] = smooth[i] + rng.normal(0.0, noise_sd);

  const auto [flo, fhi] = std::minmax_element(field.begin(), field.end());
  const double fmin = *flo;
  const double span = *fhi - *flo;

  const auto f = static_cast<std::size_t>(n_features);
  std::vector<double> data(n * f);
  auto count = [](double x) { return std::round(std::max(0.0, x)); };
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (field[i] - fmin) / span;
    double* x = &data[i * f];
    x[0] = count(20.0 * u + rng.normal(0.0, 1.5));
    x[1] = count(15.0 * (1.0 - u) + 5.0 + rng.normal(0.0, 1.5));
    for (std::size_t k = 2; k < f; ++k) x[k] = count(5.0 + rng.normal(0.0, 3.0));
  }

  std::vector<std::string> names;
  for (std::size_t k = 0; k < f; ++k) names.push_back("f" + std::to_string(k));
  return {Grid::from_dense(height, width, field), FeatureCube(height, width, std::move(names), std::move(data))};
}

}  // namespace gridfill
