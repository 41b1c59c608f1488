#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridfill/grid.hpp"

namespace gridfill {

/// A tagged map object located at continuous coordinates.
struct PointRecord {
  double h = 0.0;
  double w = 0.0;
  std::string type;
};

/// Coordinate extent mapped onto the lattice. Both spans must be positive.
struct Bounds {
  double h_min = 0.0;
  double h_max = 1.0;
  double w_min = 0.0;
  double w_max = 1.0;
};

/// Per-cell feature vectors, cell-major: data[index(cell) * F + f].
class FeatureCube {
 public:
  /// Throws InvalidArgument when F == 0, names are not unique, the data
  /// length is not H*W*F, or a value is non-finite.
  FeatureCube(int height, int width, std::vector<std::string> names, std::vector<double> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t n_features() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::span<const double> data() const noexcept { return data_; }

  bool contains(Cell c) const noexcept {
    return c.h >= 0 && c.h < height_ && c.w >= 0 && c.w < width_;
  }

  /// Feature vector of a cell; throws InvalidArgument when out of bounds.
  std::span<const double> features(Cell c) const;
  double at(Cell c, std::size_t feature) const { return features(c)[feature]; }

  friend bool operator==(const FeatureCube&, const FeatureCube&) = default;

 private:
  int height_;
  int width_;
  std::vector<std::string> names_;
  std::vector<double> data_;
};

/// Bins points into cells and counts them per distinct tag.
///
/// Features are the distinct tags in lexicographic order. A point on the
/// upper edge of the bounds falls into the last row or column. Points outside
/// the bounds are rejected: the error message reports how many.
FeatureCube ingest_points(std::span<const PointRecord> points, int height, int width,
                          const Bounds& bounds);

struct PreprocessOptions {
  bool log_transform = false;  // x -> ln(1 + x)
  bool standardise = false;    // region-wide zero mean, unit (population) variance
  bool drop_constant = false;  // remove features with stdev < 1e-12
};

/// Applies the enabled transforms in declaration order. Throws
/// InvalidArgument if drop_constant would remove every feature.
FeatureCube preprocess(const FeatureCube& cube, const PreprocessOptions& opts);

/// Rows [1, x_c] for each cell in order; an empty list gives 0 x (F+1).
Eigen::MatrixXd design_matrix(const FeatureCube& cube, std::span<const Cell> cells);

/// [x_from || x_to]: features of the source cell, then of the destination.
Eigen::VectorXd pair_features(const FeatureCube& cube, Cell from, Cell to);

}  // namespace gridfill
