#include "gridfill/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "gridfill/error.hpp"
#include "gridfill/regression.hpp"

namespace gridfill {

namespace {

constexpr double kJitter = 1e-10;

double distance(Cell a, Cell b) {
  const double dh = a.h - b.h;
  const double dw = a.w - b.w;
  return std::sqrt(dh * dh + dw * dw);
}

bool try_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs, Eigen::VectorXd& out) {
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) return false;
  out = lu.solve(rhs);
  return out.allFinite();
}

}  // namespace

Eigen::VectorXd solve_kriging_weights(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                      bool unbiased) {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n || b.size() != n) {
    throw InvalidArgument("kriging system must be square and match the right-hand side");
  }

  auto attempt = [&](double jitter, Eigen::VectorXd& weights) {
    Eigen::MatrixXd lhs = a;
    lhs.diagonal().array() += jitter;
    if (!unbiased) return try_solve(lhs, b, weights);

    Eigen::MatrixXd aug = Eigen::MatrixXd::Ones(n + 1, n + 1);
    aug.topLeftCorner(n, n) = lhs;
    aug(n, n) = 0.0;
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = b;
    rhs(n) = 1.0;
    Eigen::VectorXd sol;
    if (!try_solve(aug, rhs, sol)) return false;
    weights = sol.head(n);
    return true;
  };

  Eigen::VectorXd weights;
  if (attempt(0.0, weights) || attempt(kJitter, weights)) return weights;
  throw SingularSystem("kriging system is singular even after diagonal jitter");
}

KrigingPredictor::KrigingPredictor(const Grid& data, VariogramModel model, int n_neighbours,
                                   bool unbiased)
    : model_(model), unbiased_(unbiased) {
  if (n_neighbours < 1) throw InvalidArgument("kriging needs at least one neighbour");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.observed(i)) {
      cells_.push_back(data.cell(i));
      values_.push_back(data.value(i));
    }
  }
  if (cells_.empty()) throw InvalidArgument("kriging needs at least one observed cell");
  n_neighbours_ = std::min<std::size_t>(static_cast<std::size_t>(n_neighbours), cells_.size());
}

std::vector<std::size_t> KrigingPredictor::nearest(Cell query) const {
  std::vector<std::pair<long, std::size_t>> order(cells_.size());
  for (std::size_t j = 0; j < cells_.size(); ++j) {
    const long dh = cells_[j].h - query.h;
    const long dw = cells_[j].w - query.w;
    // cells_ is row-major, so the index breaks distance ties in row-major order.
    order[j] = {dh * dh + dw * dw, j};
  }
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_neighbours_),
                    order.end());
  std::vector<std::size_t> out(n_neighbours_);
  for (std::size_t k = 0; k < n_neighbours_; ++k) out[k] = order[k].second;
  return out;
}

KrigingEstimate KrigingPredictor::predict(Cell query) const {
  const auto idx = nearest(query);
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Cell cj = cells_[idx[static_cast<std::size_t>(j)]];
    b(j) = model_(distance(query, cj));
    for (Eigen::Index k = 0; k < n; ++k) {
      a(j, k) = model_(distance(cj, cells_[idx[static_cast<std::size_t>(k)]]));
    }
  }

  KrigingEstimate est;
  est.weights = solve_kriging_weights(a, b, unbiased_);
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::size_t src = idx[static_cast<std::size_t>(j)];
    est.neighbours.push_back(cells_[src]);
    est.value += est.weights(j) * values_[src];
  }
  return est;
}

Grid krige(const Grid& observed, const VariogramModel& model, const KrigingOptions& opts) {
  std::vector<Cell> known;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed.observed(i)) known.push_back(observed.cell(i));
  }
  if (known.empty()) throw InvalidArgument("kriging needs at least one observed cell");

  Grid data = observed;
  Eigen::VectorXd trend_theta;
  auto trend_at = [&](Cell c) {
    return trend_theta(0) + trend_theta(1) * c.h + trend_theta(2) * c.w;
  };

  if (opts.mode == KrigingMode::universal) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(known.size()), 3);
    Eigen::VectorXd y(x.rows());
    for (std::size_t r = 0; r < known.size(); ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      x(row, 0) = 1.0;
      x(row, 1) = known[r].h;
      x(row, 2) = known[r].w;
      y(row) = observed.value(known[r]);
    }
    try {
      trend_theta = fit(x, y, 0.0).theta;
    } catch (const SingularSystem&) {
      // Observed cells on a single row or column leave one slope undetermined.
      trend_theta = fit(x, y, 1e-8).theta;
    }
    for (Cell c : known) data.set(c, observed.value(c) - trend_at(c));
  }

  const KrigingPredictor predictor(data, model, opts.n_neighbours, opts.unbiased);
  Grid out = observed;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed.observed(i)) continue;
    const Cell c = observed.cell(i);
    double v = predictor.predict(c).value;
    if (opts.mode == KrigingMode::universal) v += trend_at(c);
    out.set(c, v);
  }
  return out;
}

Grid krige(const MaskedGrid& mg, const VariogramModel& model, const KrigingOptions& opts) {
  return krige(mg.visible(), model, opts);
}

}  // namespace gridfill
