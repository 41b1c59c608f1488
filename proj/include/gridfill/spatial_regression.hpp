#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "gridfill/features.hpp"
#include "gridfill/grid.hpp"

namespace gridfill {

enum class SpatialKind { sar, ma, arma };

std::string_view to_string(SpatialKind kind);

/// Basic regression: fit [1, x_c] -> y on the visible cells, predict the rest.
Grid regression_interp(const MaskedGrid& mg, const FeatureCube& cube, double ridge_lambda);

/// Design matrix over every cell (row-major) for a spatial regression.
///
/// Columns are [1, x_c] followed by the lag columns of `kind`:
///   sar:  M y    (visible values, mean substitution for missing neighbours)
///   ma:   M e    (residuals of a basic regression on visible cells, 0 where hidden)
///   arma: M y, M e
/// M is the binary adjacency of `nb`.
Eigen::MatrixXd spatial_design_matrix(const MaskedGrid& mg, const FeatureCube& cube,
                                      Neighbourhood nb, SpatialKind kind, double ridge_lambda);

/// Fits the visible rows of an all-cells design matrix and predicts the
/// hidden rows. Visible cells are copied through.
Grid fit_predict_design(const MaskedGrid& mg, const Eigen::MatrixXd& design, double ridge_lambda);

/// SAR / MA / ARMA interpolation via lag columns appended to the features.
Grid spatial_regression_interp(const MaskedGrid& mg, const FeatureCube& cube, Neighbourhood nb,
                               SpatialKind kind, double ridge_lambda);

}  // namespace gridfill
