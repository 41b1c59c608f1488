#include "gridfill/spatial_regression.hpp"

#include <numeric>
#include <vector>

#include "gridfill/error.hpp"
#include "gridfill/regression.hpp"

namespace gridfill {

std::string_view to_string(SpatialKind kind) {
  switch (kind) {
    case SpatialKind::sar: return "sar";
    case SpatialKind::ma: return "ma";
    case SpatialKind::arma: return "arma";
  }
  return "unknown";
}

namespace {

void check_shapes(const MaskedGrid& mg, const FeatureCube& cube) {
  if (mg.truth().height() != cube.height() || mg.truth().width() != cube.width()) {
    throw InvalidArgument("grid and feature cube shapes differ");
  }
  if (mg.visible().observed_count() == 0) {
    throw InvalidArgument("regression needs at least one visible cell");
  }
}

std::vector<Cell> all_cells(const Grid& g) {
  std::vector<Cell> cells(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) cells[i] = g.cell(i);
  return cells;
}

std::vector<Eigen::Index> visible_rows(const Grid& visible) {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < visible.size(); ++i) {
    if (visible.observed(i)) rows.push_back(static_cast<Eigen::Index>(i));
  }
  return rows;
}

}  // namespace

Grid fit_predict_design(const MaskedGrid& mg, const Eigen::MatrixXd& design, double ridge_lambda) {
  const Grid& visible = mg.visible();
  if (design.rows() != static_cast<Eigen::Index>(visible.size())) {
    throw InvalidArgument("design matrix must have one row per cell");
  }
  const auto rows = visible_rows(visible);
  if (rows.empty()) throw InvalidArgument("regression needs at least one visible cell");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), design.cols());
  Eigen::VectorXd y(x.rows());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    x.row(static_cast<Eigen::Index>(r)) = design.row(rows[r]);
    y(static_cast<Eigen::Index>(r)) = visible.value(static_cast<std::size_t>(rows[r]));
  }
  const LinearModel model = fit(x, y, ridge_lambda);

  Grid out = visible;
  for (std::size_t i = 0; i < visible.size(); ++i) {
    if (visible.observed(i)) continue;
    out.set(visible.cell(i), design.row(static_cast<Eigen::Index>(i)).dot(model.theta));
  }
  return out;
}

Grid regression_interp(const MaskedGrid& mg, const FeatureCube& cube, double ridge_lambda) {
  check_shapes(mg, cube);
  const auto cells = all_cells(mg.visible());
  return fit_predict_design(mg, design_matrix(cube, cells), ridge_lambda);
}

Eigen::MatrixXd spatial_design_matrix(const MaskedGrid& mg, const FeatureCube& cube,
                                      Neighbourhood nb, SpatialKind kind, double ridge_lambda) {
  check_shapes(mg, cube);
  const Grid& visible = mg.visible();
  const auto cells = all_cells(visible);
  const Eigen::MatrixXd base = design_matrix(cube, cells);

  std::vector<std::vector<double>> lags;
  if (kind == SpatialKind::sar || kind == SpatialKind::arma) {
    lags.push_back(spatial_lag(visible, nb));
  }
  if (kind == SpatialKind::ma || kind == SpatialKind::arma) {
    // "MA by AR": residuals of a preliminary basic regression stand in for
    // the unobservable errors. Hidden cells contribute zero.
    const auto rows = visible_rows(visible);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), base.cols());
    Eigen::VectorXd y(x.rows());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      x.row(static_cast<Eigen::Index>(r)) = base.row(rows[r]);
      y(static_cast<Eigen::Index>(r)) = visible.value(static_cast<std::size_t>(rows[r]));
    }
    const Eigen::VectorXd eps = residuals(fit(x, y, ridge_lambda), x, y);

    Grid resid(visible.height(), visible.width());
    for (std::size_t i = 0; i < visible.size(); ++i) resid.set(visible.cell(i), 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      resid.set(visible.cell(static_cast<std::size_t>(rows[r])), eps(static_cast<Eigen::Index>(r)));
    }
    lags.push_back(spatial_lag(resid, nb));
  }

  Eigen::MatrixXd design(base.rows(), base.cols() + static_cast<Eigen::Index>(lags.size()));
  design.leftCols(base.cols()) = base;
  for (std::size_t l = 0; l < lags.size(); ++l) {
    design.col(base.cols() + static_cast<Eigen::Index>(l)) =
        Eigen::Map<const Eigen::VectorXd>(lags[l].data(), static_cast<Eigen::Index>(lags[l].size()));
  }
  return design;
}

Grid spatial_regression_interp(const MaskedGrid& mg, const FeatureCube& cube, Neighbourhood nb,
                               SpatialKind kind, double ridge_lambda) {
  return fit_predict_design(mg, spatial_design_matrix(mg, cube, nb, kind, ridge_lambda),
                            ridge_lambda);
}

}  // namespace gridfill
