#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gridfill/rng.hpp"

namespace gridfill {

/// (mu + lambda) evolution strategy on the unit box [0, 1]^n.
struct EvolutionOptions {
  /// Generations, counting the evaluation of the initial population as the
  /// first. A budget of 1 returns the best initial member unchanged.
  int budget_iters = 100;
  /// mu == lambda: parents kept and offspring produced per generation.
  int population = 16;
  double sigma_start = 0.3;
  double sigma_end = 0.01;
  /// Per-coordinate mutation probability; 0 selects 1 / sqrt(n).
  double mutation_rate = 0.0;
  /// Stop after this many consecutive generations improving the best loss
  /// by less than min_improvement.
  int patience = 10;
  double min_improvement = 1e-9;
};

struct EvolutionResult {
  std::vector<double> best;
  double best_loss = 0.0;
  int generations = 0;
  int evaluations = 0;
  std::vector<double> best_loss_trace;  // after each generation
};

using BoxLoss = std::function<double(std::span<const double>)>;

/// Minimises `loss` starting from `seeds` (each of length dim), topped up to
/// the population size with uniform random members. Offspring pick a parent
/// uniformly, perturb coordinates with N(0, sigma^2) and clip to [0, 1];
/// sigma decays geometrically from sigma_start to sigma_end over the budget.
/// Selection is elitist and stable (on equal loss, older members win), so the
/// returned loss never exceeds the best seed's loss.
EvolutionResult minimise_in_unit_box(const BoxLoss& loss, std::size_t dim,
                                     std::vector<std::vector<double>> seeds,
                                     const EvolutionOptions& opts, Rng& rng);

}  // namespace gridfill
