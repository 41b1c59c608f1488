#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "gridfill/grid.hpp"

namespace gridfill {

enum class VariogramKind { linear, exponential, gaussian };

std::string_view to_string(VariogramKind kind);
VariogramKind parse_variogram_kind(std::string_view text);

/// Semivariance model. Exponential and Gaussian forms use the practical-range
/// convention (95% of the partial sill reached at d == range).
struct VariogramModel {
  VariogramKind kind = VariogramKind::linear;
  double nugget = 0.0;
  double sill = 1.0;
  double range = 1.0;

  /// Shape in [0, 1], nondecreasing in d, zero at d == 0.
  static double shape(VariogramKind kind, double d, double range);

  double operator()(double d) const { return nugget + (sill - nugget) * shape(kind, d, range); }
};

struct SemivarianceBin {
  double distance = 0.0;  // mean pair distance in the bin
  double gamma = 0.0;
  std::size_t pair_count = 0;
};

struct EmpiricalSemivariance {
  std::vector<SemivarianceBin> bins;  // strictly increasing distance
};

/// Classical estimator over all unordered pairs of observed cells of
/// `values` at Euclidean cell distance d <= max_lag. Pairs go to bin
/// ceil(d / bin_width); each bin reports (1 / 2n) * sum (y_i - y_j)^2.
EmpiricalSemivariance empirical_semivariance(const Grid& values, double bin_width, double max_lag);

inline EmpiricalSemivariance empirical_semivariance(const MaskedGrid& mg, double bin_width,
                                                    double max_lag) {
  return empirical_semivariance(mg.visible(), bin_width, max_lag);
}

/// Pair-count weighted least squares fit of (nugget, sill, range).
///
/// For a fixed range the model is linear in (nugget, partial sill), which is
/// solved exactly under nugget >= 0, partial sill >= 0. The range is found
/// by a log-spaced scan followed by golden-section refinement. Needs >= 3 bins.
VariogramModel fit_variogram(const EmpiricalSemivariance& emp, VariogramKind kind);

/// Weighted sum of squared residuals of a model against the bins.
double variogram_sse(const EmpiricalSemivariance& emp, const VariogramModel& model);

}  // namespace gridfill
