#include "gridfill/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "gridfill/error.hpp"

namespace gridfill {

FeatureCube::FeatureCube(int height, int width, std::vector<std::string> names,
                         std::vector<double> data)
    : height_(height), width_(width), names_(std::move(names)), data_(std::move(data)) {
  if (height_ <= 0 || width_ <= 0) throw InvalidArgument("feature cube dimensions must be positive");
  if (names_.empty()) throw InvalidArgument("feature cube needs at least one feature");
  if (std::set<std::string>(names_.begin(), names_.end()).size() != names_.size()) {
    throw InvalidArgument("feature names must be unique");
  }
  const std::size_t expected =
      static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_) * names_.size();
  if (data_.size() != expected) {
    throw InvalidArgument("feature cube length mismatch: expected " + std::to_string(expected) +
                          ", got " + std::to_string(data_.size()));
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
    throw InvalidArgument("feature cube contains a non-finite value");
  }
}

std::span<const double> FeatureCube::features(Cell c) const {
  if (!contains(c)) {
    throw InvalidArgument("cell (" + std::to_string(c.h) + "," + std::to_string(c.w) +
                          ") outside the feature cube");
  }
  const std::size_t f = names_.size();
  const std::size_t i = static_cast<std::size_t>(c.h) * width_ + c.w;
  return std::span<const double>(data_).subspan(i * f, f);
}

namespace {

int bin_coordinate(double x, double lo, double hi, int n) {
  const double t = (x - lo) / (hi - lo) * n;
  return std::min(static_cast<int>(std::floor(t)), n - 1);
}

}  // namespace

FeatureCube ingest_points(std::span<const PointRecord> points, int height, int width,
                          const Bounds& bounds) {
  if (height <= 0 || width <= 0) throw InvalidArgument("grid dimensions must be positive");
  if (!(bounds.h_max > bounds.h_min) || !(bounds.w_max > bounds.w_min)) {
    throw InvalidArgument("degenerate bounds");
  }
  if (points.empty()) throw InvalidArgument("no points to ingest");

  std::size_t outside = 0;
  std::set<std::string> tags;
  for (const PointRecord& pt : points) {
    if (!std::isfinite(pt.h) || !std::isfinite(pt.w)) {
      throw InvalidArgument("point with non-finite coordinates");
    }
    if (pt.type.empty()) throw InvalidArgument("point with an empty type tag");
    if (pt.h < bounds.h_min || pt.h > bounds.h_max || pt.w < bounds.w_min || pt.w > bounds.w_max) {
      ++outside;
    }
    tags.insert(pt.type);
  }
  if (outside > 0) {
    throw InvalidArgument(std::to_string(outside) + " of " + std::to_string(points.size()) +
                          " points fall outside the bounds");
  }

  std::vector<std::string> names(tags.begin(), tags.end());
  std::map<std::string, std::size_t> column;
  for (std::size_t f = 0; f < names.size(); ++f) column[names[f]] = f;

  const std::size_t nf = names.size();
  std::vector<double> data(static_cast<std::size_t>(height) * width * nf, 0.0);
  for (const PointRecord& pt : points) {
    const int h = bin_coordinate(pt.h, bounds.h_min, bounds.h_max, height);
    const int w = bin_coordinate(pt.w, bounds.w_min, bounds.w_max, width);
    data[(static_cast<std::size_t>(h) * width + w) * nf + column[pt.type]] += 1.0;
  }
  return FeatureCube(height, width, std::move(names), std::move(data));
}

FeatureCube preprocess(const FeatureCube& cube, const PreprocessOptions& opts) {
  const std::size_t nf = cube.n_features();
  const std::size_t n_cells = static_cast<std::size_t>(cube.height()) * cube.width();
  std::vector<double> data(cube.data().begin(), cube.data().end());

  if (opts.log_transform) {
    for (double& v : data) v = std::log1p(v);
  }

  auto column_stats = [&](std::size_t f) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i) mean += data[i * nf + f];
    mean /= static_cast<double>(n_cells);
    double ss = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i) {
      const double d = data[i * nf + f] - mean;
      ss += d * d;
    }
    return std::pair{mean, std::sqrt(ss / static_cast<double>(n_cells))};
  };

  constexpr double kFlat = 1e-12;
  if (opts.standardise) {
    for (std::size_t f = 0; f < nf; ++f) {
      const auto [mean, sd] = column_stats(f);
      if (sd < kFlat) continue;
      for (std::size_t i = 0; i < n_cells; ++i) data[i * nf + f] = (data[i * nf + f] - mean) / sd;
    }
  }

  if (!opts.drop_constant) return FeatureCube(cube.height(), cube.width(), cube.names(), std::move(data));

  std::vector<std::size_t> keep;
  for (std::size_t f = 0; f < nf; ++f) {
    if (column_stats(f).second >= kFlat) keep.push_back(f);
  }
  if (keep.empty()) throw InvalidArgument("every feature is constant; nothing left after drop_constant");

  std::vector<std::string> names;
  for (std::size_t f : keep) names.push_back(cube.names()[f]);
  std::vector<double> kept;
  kept.reserve(n_cells * keep.size());
  for (std::size_t i = 0; i < n_cells; ++i) {
    for (std::size_t f : keep) kept.push_back(data[i * nf + f]);
  }
  return FeatureCube(cube.height(), cube.width(), std::move(names), std::move(kept));
}

Eigen::MatrixXd design_matrix(const FeatureCube& cube, std::span<const Cell> cells) {
  const auto nf = static_cast<Eigen::Index>(cube.n_features());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(cells.size()), nf + 1);
  for (std::size_t r = 0; r < cells.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    const auto feats = cube.features(cells[r]);
    x(row, 0) = 1.0;
    for (Eigen::Index f = 0; f < nf; ++f) x(row, f + 1) = feats[static_cast<std::size_t>(f)];
  }
  return x;
}

Eigen::VectorXd pair_features(const FeatureCube& cube, Cell from, Cell to) {
  const auto a = cube.features(from);
  const auto b = cube.features(to);
  Eigen::VectorXd out(static_cast<Eigen::Index>(a.size() + b.size()));
  for (std::size_t f = 0; f < a.size(); ++f) out(static_cast<Eigen::Index>(f)) = a[f];
  for (std::size_t f = 0; f < b.size(); ++f) out(static_cast<Eigen::Index>(a.size() + f)) = b[f];
  return out;
}

}  // namespace gridfill
