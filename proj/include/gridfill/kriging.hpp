#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gridfill/grid.hpp"
#include "gridfill/variogram.hpp"

namespace gridfill {

enum class KrigingMode { ordinary, universal };

struct KrigingOptions {
  int n_neighbours = 16;  // clamped to the number of observed cells
  KrigingMode mode = KrigingMode::ordinary;
  /// Adds the Lagrange row constraining the weights to sum to one.
  bool unbiased = true;
};

/// Solves A * gamma = b for the kriging weights. With `unbiased` the system is
/// augmented with a Lagrange multiplier so that sum(gamma) == 1. A singular
/// system is retried once with 1e-10 added to the diagonal of A; throws
/// SingularSystem if that also fails.
Eigen::VectorXd solve_kriging_weights(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                      bool unbiased);

struct KrigingEstimate {
  double value = 0.0;
  std::vector<Cell> neighbours;
  Eigen::VectorXd weights;
};

/// Point predictor over the observed cells of a grid.
class KrigingPredictor {
 public:
  KrigingPredictor(const Grid& data, VariogramModel model, int n_neighbours, bool unbiased);

  /// Estimate at any in-bounds cell. The query may itself be observed; it is
  /// then its own nearest neighbour.
  KrigingEstimate predict(Cell query) const;

  /// The n nearest observed cells (Euclidean, ties by row-major order).
  std::vector<std::size_t> nearest(Cell query) const;

 private:
  std::vector<Cell> cells_;
  std::vector<double> values_;
  VariogramModel model_;
  std::size_t n_neighbours_;
  bool unbiased_;
};

/// Fills every hidden cell of the mask; visible cells are copied through.
/// Universal mode removes a least-squares trend in (h, w) before kriging the
/// residuals and adds it back afterwards.
Grid krige(const MaskedGrid& mg, const VariogramModel& model, const KrigingOptions& opts = {});

/// Same as above for every missing cell of a partially observed grid.
Grid krige(const Grid& observed, const VariogramModel& model, const KrigingOptions& opts = {});

}  // namespace gridfill
