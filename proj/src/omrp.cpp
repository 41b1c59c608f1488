#include "gridfill/omrp.hpp"

#include <algorithm>

#include "gridfill/error.hpp"
#include "gridfill/rng.hpp"

namespace gridfill {

namespace {

// Keeps the optimiser's stream apart from the hiding stream of the same seed.
constexpr std::uint64_t kOptimiserStream = 0x6f2d6d72702d6573ULL;

void check_cube(const Grid& g, const FeatureCube& cube) {
  if (g.height() != cube.height() || g.width() != cube.width()) {
    throw InvalidArgument("grid and feature cube shapes differ");
  }
}

}  // namespace

OmrpResult optimise_edge_weights(const MaskedGrid& train, Neighbourhood nb,
                                 const MrpSettings& settings, const OmrpOptions& opts,
                                 std::uint64_t seed) {
  if (train.hidden().empty()) throw InvalidArgument("O-MRP needs hidden cells to optimise against");

  const GammaTuning tuned = tune_gamma_detailed(train, nb, settings, opts.gamma_candidates);
  EdgeWeightSet scratch(train.visible().height(), train.visible().width(), nb, tuned.gamma);

  const BoxLoss loss = [&](std::span<const double> x) {
    scratch.assign(x);
    return mae(mrp_run_weighted(train.visible(), scratch, settings).grid, train.truth(), train.hidden());
  };

  Rng rng(mix64(seed ^ kOptimiserStream));
  std::vector<std::vector<double>> seeds{scratch.flatten()};
  const EvolutionResult es = minimise_in_unit_box(loss, scratch.size(), std::move(seeds), opts.es, rng);

  OmrpResult out{scratch};
  out.weights.assign(es.best);
  out.loss = es.best_loss;
  out.seed_gamma = tuned.gamma;
  out.seed_loss = tuned.loss;
  out.generations = es.generations;
  out.evaluations = es.evaluations;
  return out;
}

OmrpResult omrp_optimise(const Grid& truth, Neighbourhood nb, const MrpSettings& settings,
                         const OmrpOptions& opts, std::uint64_t seed) {
  if (!truth.fully_observed()) {
    throw InvalidArgument("O-MRP needs a fully observed training grid");
  }
  return optimise_edge_weights(hide_values(truth, opts.p_train, seed), nb, settings, opts, seed);
}

double WeightModel::predict(const Eigen::VectorXd& features) const {
  if (features.size() + 1 != inner_.theta.size()) {
    throw InvalidArgument("weight model expects " + std::to_string(inner_.theta.size() - 1) +
                          " pair features, got " + std::to_string(features.size()));
  }
  const double raw = inner_.theta(0) + features.dot(inner_.theta.tail(features.size()));
  if (!(raw >= 0.0)) return 0.0;  // also maps NaN to 0
  return std::min(raw, 1.0);
}

WeightModel fit_weight_model(const EdgeWeightSet& optimal, const FeatureCube& cube,
                             double ridge_lambda) {
  if (optimal.height() != cube.height() || optimal.width() != cube.width()) {
    throw InvalidArgument("edge weight set and feature cube shapes differ");
  }
  const auto& edges = optimal.edges();
  const auto width = static_cast<Eigen::Index>(2 * cube.n_features() + 1);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(edges.size()), width);
  Eigen::VectorXd y(x.rows());
  const auto targets = optimal.flatten();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto row = static_cast<Eigen::Index>(e);
    x(row, 0) = 1.0;
    x.row(row).tail(width - 1) = pair_features(cube, edges[e].from, edges[e].to).transpose();
    y(row) = targets[e];
  }
  return WeightModel(fit(x, y, ridge_lambda));
}

WpMrpFit wp_mrp_fit(const MaskedGrid& train, const FeatureCube& train_cube, Neighbourhood nb,
                    const MrpSettings& settings, const WpMrpOptions& opts, std::uint64_t seed) {
  check_cube(train.truth(), train_cube);
  OmrpResult optimisation = optimise_edge_weights(train, nb, settings, opts.omrp, seed);
  WeightModel model = fit_weight_model(optimisation.weights, train_cube, opts.ridge_lambda);
  return {std::move(model), std::move(optimisation)};
}

WpMrpFit wp_mrp_fit(const Grid& train_truth, const FeatureCube& train_cube, Neighbourhood nb,
                    const MrpSettings& settings, const WpMrpOptions& opts, std::uint64_t seed) {
  check_cube(train_truth, train_cube);
  if (!train_truth.fully_observed()) {
    throw InvalidArgument("WP-MRP training needs a fully observed training grid");
  }
  return wp_mrp_fit(hide_values(train_truth, opts.omrp.p_train, seed), train_cube, nb, settings,
                    opts, seed);
}

EdgeWeightSet predict_edge_weights(const WeightModel& model, const FeatureCube& cube,
                                   Neighbourhood nb) {
  EdgeWeightSet ws(cube.height(), cube.width(), nb);
  std::vector<double> flat;
  flat.reserve(ws.size());
  for (const Edge& e : ws.edges()) flat.push_back(model.predict(pair_features(cube, e.from, e.to)));
  ws.assign(flat);
  return ws;
}

MrpResult wp_mrp_run(const Grid& anchors, const FeatureCube& cube, const WeightModel& model,
                     Neighbourhood nb, const MrpSettings& settings) {
  check_cube(anchors, cube);
  return mrp_run_weighted(anchors, predict_edge_weights(model, cube, nb), settings);
}

}  // namespace gridfill
