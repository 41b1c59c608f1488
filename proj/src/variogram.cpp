#include "gridfill/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "gridfill/error.hpp"

namespace gridfill {

std::string_view to_string(VariogramKind kind) {
  switch (kind) {
    case VariogramKind::linear: return "linear";
    case VariogramKind::exponential: return "exponential";
    case VariogramKind::gaussian: return "gaussian";
  }
  return "unknown";
}

VariogramKind parse_variogram_kind(std::string_view text) {
  if (text == "linear") return VariogramKind::linear;
  if (text == "exponential") return VariogramKind::exponential;
  if (text == "gaussian") return VariogramKind::gaussian;
  throw InvalidArgument("unknown variogram kind '" + std::string(text) + "'");
}

double VariogramModel::shape(VariogramKind kind, double d, double range) {
  switch (kind) {
    case VariogramKind::linear: return std::min(d / range, 1.0);
    case VariogramKind::exponential: return 1.0 - std::exp(-3.0 * d / range);
    case VariogramKind::gaussian: return 1.0 - std::exp(-3.0 * d * d / (range * range));
  }
  return 0.0;
}

EmpiricalSemivariance empirical_semivariance(const Grid& values, double bin_width, double max_lag) {
  if (!(bin_width > 0.0) || !(max_lag > 0.0)) {
    throw InvalidArgument("bin width and max lag must be positive");
  }
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values.observed(i)) cells.push_back(values.cell(i));
  }
  if (cells.size() < 2) throw InvalidArgument("semivariance needs at least two observed cells");

  struct Acc {
    double distance_sum = 0.0;
    double sq_sum = 0.0;
    std::size_t count = 0;
  };
  std::map<long, Acc> bins;
  for (std::size_t a = 0; a < cells.size(); ++a) {
    const double ya = values.value(values.index(cells[a]));
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      const double dh = cells[a].h - cells[b].h;
      const double dw = cells[a].w - cells[b].w;
      const double d = std::sqrt(dh * dh + dw * dw);
      if (d > max_lag) continue;
      const double diff = ya - values.value(values.index(cells[b]));
      Acc& acc = bins[static_cast<long>(std::ceil(d / bin_width))];
      acc.distance_sum += d;
      acc.sq_sum += diff * diff;
      ++acc.count;
    }
  }
  if (bins.empty()) throw InvalidArgument("no cell pair lies within the max lag");

  EmpiricalSemivariance emp;
  for (const auto& [k, acc] : bins) {
    const auto n = static_cast<double>(acc.count);
    emp.bins.push_back({acc.distance_sum / n, acc.sq_sum / (2.0 * n), acc.count});
  }
  return emp;
}

double variogram_sse(const EmpiricalSemivariance& emp, const VariogramModel& model) {
  double sse = 0.0;
  for (const auto& bin : emp.bins) {
    const double r = bin.gamma - model(bin.distance);
    sse += static_cast<double>(bin.pair_count) * r * r;
  }
  return sse;
}

namespace {

struct LinearPart {
  double nugget = 0.0;
  double partial_sill = 0.0;
  double sse = 0.0;
};

// Exact non-negative weighted least squares for gamma ~ nugget + psill * f(d).
LinearPart fit_linear_part(const EmpiricalSemivariance& emp, VariogramKind kind, double range) {
  double sc = 0, sf = 0, sff = 0, sg = 0, sfg = 0;
  std::vector<double> f(emp.bins.size());
  for (std::size_t i = 0; i < emp.bins.size(); ++i) {
    const auto& bin = emp.bins[i];
    const double c = static_cast<double>(bin.pair_count);
    f[i] = VariogramModel::shape(kind, bin.distance, range);
    sc += c;
    sf += c * f[i];
    sff += c * f[i] * f[i];
    sg += c * bin.gamma;
    sfg += c * f[i] * bin.gamma;
  }
  auto sse_of = [&](double n, double s) {
    double total = 0.0;
    for (std::size_t i = 0; i < emp.bins.size(); ++i) {
      const double r = emp.bins[i].gamma - n - s * f[i];
      total += static_cast<double>(emp.bins[i].pair_count) * r * r;
    }
    return total;
  };

  LinearPart best{0.0, 0.0, sse_of(0.0, 0.0)};
  auto consider = [&](double n, double s) {
    if (n < 0.0 || s < 0.0) return;
    const double sse = sse_of(n, s);
    if (sse < best.sse) best = {n, s, sse};
  };
  // Pure nugget first so that it wins ties against a structure it cannot be told apart from.
  consider(std::max(0.0, sg / sc), 0.0);
  const double det = sc * sff - sf * sf;
  if (det > 1e-12 * sc * std::max(sff, 1e-300)) {
    consider((sff * sg - sf * sfg) / det, (sc * sfg - sf * sg) / det);
  }
  if (sff > 0.0) consider(0.0, std::max(0.0, sfg / sff));
  return best;
}

}  // namespace

VariogramModel fit_variogram(const EmpiricalSemivariance& emp, VariogramKind kind) {
  if (emp.bins.size() < 3) {
    throw InvalidArgument("fit_variogram needs at least 3 bins, got " +
                          std::to_string(emp.bins.size()));
  }
  const double d_min = emp.bins.front().distance;
  const double d_max = emp.bins.back().distance;

  constexpr int kScan = 240;
  const double lo = std::log(0.1 * d_min);
  const double hi = std::log(10.0 * d_max);
  std::vector<double> grid(kScan);
  int best_i = 0;
  double best_sse = INFINITY;
  for (int i = 0; i < kScan; ++i) {
    grid[i] = std::exp(lo + (hi - lo) * i / (kScan - 1));
    const double sse = fit_linear_part(emp, kind, grid[i]).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_i = i;
    }
  }

  // Golden-section search in log-range between the scan neighbours of the best point.
  double a = std::log(grid[std::max(best_i - 1, 0)]);
  double b = std::log(grid[std::min(best_i + 1, kScan - 1)]);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto obj = [&](double lr) { return fit_linear_part(emp, kind, std::exp(lr)).sse; };
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = obj(x1);
  double f2 = obj(x2);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = obj(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = obj(x2);
    }
  }
  double range = std::exp(0.5 * (a + b));
  if (obj(std::log(range)) > best_sse) range = grid[best_i];

  const LinearPart part = fit_linear_part(emp, kind, range);
  // A flat fit carries no range information; report the largest lag.
  if (part.partial_sill == 0.0) range = d_max;
  return VariogramModel{kind, part.nugget, part.nugget + part.partial_sill, range};
}

}  // namespace gridfill
