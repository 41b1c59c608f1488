#pragma once

#include <Eigen/Dense>

namespace gridfill {

/// Linear predictor y = X * theta. Column 0 of X is the intercept.
struct LinearModel {
  Eigen::VectorXd theta;
  double ridge_lambda = 0.0;
};

/// Ridge least squares:
///
///   theta = argmin |X theta - y|^2 + lambda * |theta[1:]|^2
///
/// solved from the normal equations by Cholesky. The intercept is never
/// penalised. Throws SingularSystem when lambda == 0 and X is rank deficient,
/// InvalidArgument on empty or mismatched inputs, negative lambda, or
/// non-finite entries.
LinearModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double ridge_lambda);

/// X * theta; throws InvalidArgument when the column count differs.
Eigen::VectorXd predict(const LinearModel& model, const Eigen::MatrixXd& x);

/// y - X * theta.
Eigen::VectorXd residuals(const LinearModel& model, const Eigen::MatrixXd& x,
                          const Eigen::VectorXd& y);

/// Penalised objective at theta, as minimised by fit().
double ridge_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& theta, double ridge_lambda);

}  // namespace gridfill
