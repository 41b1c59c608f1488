#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gridfill/evolution.hpp"
#include "gridfill/features.hpp"
#include "gridfill/mrp.hpp"
#include "gridfill/regression.hpp"

namespace gridfill {

struct OmrpOptions {
  /// Share of the truth hidden to form the optimisation loss.
  double p_train = 0.2;
  EvolutionOptions es;
  /// Constant-gamma values tried for the seed member of the population.
  std::vector<double> gamma_candidates = default_gamma_candidates();
};

struct OmrpResult {
  EdgeWeightSet weights;
  double loss = 0.0;        // MAE over the training hidden cells
  double seed_gamma = 0.0;  // best constant gamma
  double seed_loss = 0.0;   // its MAE; loss <= seed_loss always
  int generations = 0;
  int evaluations = 0;
};

/// Per-edge weight search on a mask whose hidden cells carry ground truth.
/// The loss is the MAE of mrp_run_weighted over those hidden cells. The
/// population is seeded with the constant-gamma set of the best tuned
/// candidate plus uniform random sets.
OmrpResult optimise_edge_weights(const MaskedGrid& train, Neighbourhood nb,
                                 const MrpSettings& settings, const OmrpOptions& opts,
                                 std::uint64_t seed);

/// Hides round(p_train * n) cells of a fully observed truth with `seed` and
/// optimises the edge weights against them.
OmrpResult omrp_optimise(const Grid& truth, Neighbourhood nb, const MrpSettings& settings,
                         const OmrpOptions& opts, std::uint64_t seed);

/// Edge-weight regressor on pair features, clamped to [0, 1].
class WeightModel {
 public:
  explicit WeightModel(LinearModel inner) : inner_(std::move(inner)) {}

  const LinearModel& inner() const noexcept { return inner_; }

  /// `features` is pair_features(from, to), without the bias term.
  double predict(const Eigen::VectorXd& features) const;

 private:
  LinearModel inner_;
};

/// Ridge fit of the weight model on every directed edge of `optimal`:
/// rows [1, x_from, x_to] against the optimised weights.
WeightModel fit_weight_model(const EdgeWeightSet& optimal, const FeatureCube& cube,
                             double ridge_lambda);

struct WpMrpOptions {
  OmrpOptions omrp;
  double ridge_lambda = 1e-8;
};

struct WpMrpFit {
  WeightModel model;
  OmrpResult optimisation;
};

/// Optimises edge weights on a fully observed training region, then fits the
/// weight model to them.
WpMrpFit wp_mrp_fit(const Grid& train_truth, const FeatureCube& train_cube, Neighbourhood nb,
                    const MrpSettings& settings, const WpMrpOptions& opts, std::uint64_t seed);

/// Same, on a prepared training mask (its truth may be partially observed).
WpMrpFit wp_mrp_fit(const MaskedGrid& train, const FeatureCube& train_cube, Neighbourhood nb,
                    const MrpSettings& settings, const WpMrpOptions& opts, std::uint64_t seed);

/// Evaluates the model on every directed edge of the cube's lattice.
EdgeWeightSet predict_edge_weights(const WeightModel& model, const FeatureCube& cube,
                                   Neighbourhood nb);

/// Weighted MRP over a test region with model-predicted edge weights.
MrpResult wp_mrp_run(const Grid& anchors, const FeatureCube& cube, const WeightModel& model,
                     Neighbourhood nb, const MrpSettings& settings = {});

inline MrpResult wp_mrp_run(const MaskedGrid& mg, const FeatureCube& cube, const WeightModel& model,
                            Neighbourhood nb, const MrpSettings& settings = {}) {
  return wp_mrp_run(mg.visible(), cube, model, nb, settings);
}

}  // namespace gridfill
