#include "gridfill/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridfill/error.hpp"

namespace gridfill {

namespace {

struct Member {
  std::vector<double> x;
  double loss;
};

}  // namespace

EvolutionResult minimise_in_unit_box(const BoxLoss& loss, std::size_t dim,
                                     std::vector<std::vector<double>> seeds,
                                     const EvolutionOptions& opts, Rng& rng) {
  if (opts.budget_iters < 1 || opts.population < 1) {
    throw InvalidArgument("evolution strategy needs a positive budget and population");
  }
  if (dim == 0) throw InvalidArgument("evolution strategy needs a non-empty search space");
  const auto mu = static_cast<std::size_t>(opts.population);
  if (seeds.size() > mu) seeds.resize(mu);

  EvolutionResult out;
  std::vector<Member> pop;
  for (auto& s : seeds) {
    if (s.size() != dim) throw InvalidArgument("seed member has the wrong dimension");
    for (double& v : s) v = std::clamp(v, 0.0, 1.0);
    pop.push_back({std::move(s), 0.0});
  }
  while (pop.size() < mu) {
    std::vector<double> x(dim);
    for (double& v : x) v = rng.uniform();
    pop.push_back({std::move(x), 0.0});
  }
  for (auto& m : pop) m.loss = loss(m.x);
  out.evaluations = static_cast<int>(pop.size());

  auto by_loss = [](const Member& a, const Member& b) { return a.loss < b.loss; };
  std::stable_sort(pop.begin(), pop.end(), by_loss);
  out.generations = 1;
  out.best_loss_trace.push_back(pop.front().loss);

  const double rate = opts.mutation_rate > 0.0
                          ? std::min(opts.mutation_rate, 1.0)
                          : 1.0 / std::sqrt(static_cast<double>(dim));
  const int offspring_generations = opts.budget_iters - 1;
  int stalled = 0;

  for (int g = 0; g < offspring_generations; ++g) {
    const double t = offspring_generations > 1 ? static_cast<double>(g) / (offspring_generations - 1) : 0.0;
    const double sigma = opts.sigma_start * std::pow(opts.sigma_end / opts.sigma_start, t);
    const double before = pop.front().loss;

    std::vector<Member> children;
    children.reserve(mu);
    for (std::size_t c = 0; c < mu; ++c) {
      std::vector<double> x = pop[rng.below(pop.size())].x;
      bool changed = false;
      for (double& v : x) {
        if (rng.uniform() < rate) {
          v = std::clamp(v + sigma * rng.normal(), 0.0, 1.0);
          changed = true;
        }
      }
      if (!changed) {
        double& v = x[rng.below(dim)];
        v = std::clamp(v + sigma * rng.normal(), 0.0, 1.0);
      }
      const double l = loss(x);
      children.push_back({std::move(x), l});
    }
    out.evaluations += static_cast<int>(mu);

    pop.insert(pop.end(), std::make_move_iterator(children.begin()),
               std::make_move_iterator(children.end()));
    std::stable_sort(pop.begin(), pop.end(), by_loss);
    pop.resize(mu);
    ++out.generations;
    out.best_loss_trace.push_back(pop.front().loss);

    stalled = (before - pop.front().loss < opts.min_improvement) ? stalled + 1 : 0;
    if (stalled >= opts.patience) break;
  }

  out.best = std::move(pop.front().x);
  out.best_loss = pop.front().loss;
  return out;
}

}  // namespace gridfill
