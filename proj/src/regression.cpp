#include "gridfill/regression.hpp"

#include <string>

#include "gridfill/error.hpp"

namespace gridfill {

namespace {

// Squared Cholesky pivots below this fraction of the largest diagonal entry
// are treated as exact rank deficiency when no ridge term is present.
constexpr double kRelativePivot = 1e-12;

}  // namespace

LinearModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double ridge_lambda) {
  if (x.rows() < 1 || x.cols() < 1) throw InvalidArgument("fit: empty design matrix");
  if (x.rows() != y.size()) {
    throw InvalidArgument("fit: " + std::to_string(x.rows()) + " rows but " +
                          std::to_string(y.size()) + " targets");
  }
  if (!(ridge_lambda >= 0.0)) throw InvalidArgument("fit: ridge lambda must be non-negative");
  if (!x.allFinite() || !y.allFinite()) throw InvalidArgument("fit: non-finite input");

  Eigen::MatrixXd gram = x.transpose() * x;
  for (Eigen::Index j = 1; j < gram.rows(); ++j) gram(j, j) += ridge_lambda;
  const Eigen::VectorXd rhs = x.transpose() * y;

  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularSystem("fit: normal equations are not positive definite (rank-deficient design)");
  }
  if (ridge_lambda == 0.0) {
    const Eigen::VectorXd pivots = llt.matrixL().toDenseMatrix().diagonal();
    const double scale = gram.diagonal().maxCoeff();
    if (pivots.array().square().minCoeff() <= kRelativePivot * scale) {
      throw SingularSystem("fit: design matrix is numerically rank deficient");
    }
  }
  return LinearModel{llt.solve(rhs), ridge_lambda};
}

Eigen::VectorXd predict(const LinearModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.theta.size()) {
    throw InvalidArgument("predict: design has " + std::to_string(x.cols()) +
                          " columns, model expects " + std::to_string(model.theta.size()));
  }
  return x * model.theta;
}

Eigen::VectorXd residuals(const LinearModel& model, const Eigen::MatrixXd& x,
                          const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw InvalidArgument("residuals: row count mismatch");
  return y - predict(model, x);
}

double ridge_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& theta, double ridge_lambda) {
  const double penalty = theta.size() > 1 ? theta.tail(theta.size() - 1).squaredNorm() : 0.0;
  return (x * theta - y).squaredNorm() + ridge_lambda * penalty;
}

}  // namespace gridfill
