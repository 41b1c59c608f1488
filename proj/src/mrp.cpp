#include "gridfill/mrp.hpp"

#include <algorithm>
#include <string>

#include "gridfill/error.hpp"

namespace gridfill {

EdgeWeightSet::EdgeWeightSet(int height, int width, Neighbourhood nb, double fill)
    : height_(height), width_(width), nb_(nb) {
  if (height <= 0 || width <= 0) throw InvalidArgument("edge weight set needs a positive shape");
  if (!(fill >= 0.0 && fill <= 1.0)) throw InvalidArgument("edge weights must lie in [0,1]");
  const auto offsets = neighbour_offsets(nb);
  const std::size_t plane = static_cast<std::size_t>(height) * width;
  planes_.assign(offsets.size() * plane, 0.0);
  for (int h = 0; h < height; ++h) {
    for (int w = 0; w < width; ++w) {
      for (std::size_t k = 0; k < offsets.size(); ++k) {
        const Cell from{h + offsets[k].dh, w + offsets[k].dw};
        if (from.h < 0 || from.h >= height || from.w < 0 || from.w >= width) continue;
        const std::size_t s = k * plane + static_cast<std::size_t>(h) * width + w;
        planes_[s] = fill;
        edges_.push_back({from, {h, w}});
        edge_slots_.push_back(s);
      }
    }
  }
}

std::size_t EdgeWeightSet::slot(Cell from, Cell to) const {
  auto inside = [&](Cell c) { return c.h >= 0 && c.h < height_ && c.w >= 0 && c.w < width_; };
  if (inside(from) && inside(to)) {
    const auto offsets = neighbour_offsets(nb_);
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      if (from.h - to.h == offsets[k].dh && from.w - to.w == offsets[k].dw) {
        return k * static_cast<std::size_t>(height_) * width_ +
               static_cast<std::size_t>(to.h) * width_ + to.w;
      }
    }
  }
  throw InvalidArgument("no edge (" + std::to_string(from.h) + "," + std::to_string(from.w) +
                        ") -> (" + std::to_string(to.h) + "," + std::to_string(to.w) +
                        ") in this lattice");
}

double EdgeWeightSet::weight(Cell from, Cell to) const { return planes_[slot(from, to)]; }

void EdgeWeightSet::set_weight(Cell from, Cell to, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("edge weights must lie in [0,1]");
  planes_[slot(from, to)] = w;
}

std::vector<double> EdgeWeightSet::flatten() const {
  std::vector<double> flat(edge_slots_.size());
  for (std::size_t e = 0; e < edge_slots_.size(); ++e) flat[e] = planes_[edge_slots_[e]];
  return flat;
}

void EdgeWeightSet::assign(std::span<const double> flat) {
  if (flat.size() != edge_slots_.size()) {
    throw InvalidArgument("expected " + std::to_string(edge_slots_.size()) + " edge weights, got " +
                          std::to_string(flat.size()));
  }
  for (std::size_t e = 0; e < flat.size(); ++e) {
    if (!(flat[e] >= 0.0 && flat[e] <= 1.0)) throw InvalidArgument("edge weights must lie in [0,1]");
    planes_[edge_slots_[e]] = flat[e];
  }
}

std::string_view to_string(Aggregation a) { return a == Aggregation::sum ? "sum" : "mean"; }

Aggregation parse_aggregation(std::string_view text) {
  if (text == "sum") return Aggregation::sum;
  if (text == "mean") return Aggregation::mean;
  throw InvalidArgument("unknown aggregation '" + std::string(text) + "'");
}

MrpResult mrp_run_weighted(const Grid& anchors, const EdgeWeightSet& weights,
                           const MrpSettings& settings) {
  const int height = anchors.height();
  const int width = anchors.width();
  if (weights.height() != height || weights.width() != width) {
    throw InvalidArgument("edge weight set shape does not match the grid");
  }
  if (anchors.observed_count() == 0) throw InvalidArgument("MRP needs at least one observed cell");
  if (settings.max_iter < 1 || !(settings.tol > 0.0)) {
    throw InvalidArgument("MRP needs max_iter >= 1 and tol > 0");
  }

  const auto offsets = neighbour_offsets(weights.neighbourhood());
  const std::ptrdiff_t padded_width = width + 2;
  std::vector<std::ptrdiff_t> padded_offsets;
  for (const Offset& o : offsets) padded_offsets.push_back(o.dh * padded_width + o.dw);

  const std::size_t n = anchors.size();
  std::vector<double> divisor(n, 1.0);
  std::vector<double> update(n, 0.0);
  std::vector<double> prev(static_cast<std::size_t>(height + 2) * padded_width, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Cell c = anchors.cell(i);
    if (settings.aggregation == Aggregation::mean) {
      divisor[i] = static_cast<double>(neighbours(c, weights.neighbourhood(), height, width).size());
    }
    if (anchors.observed(i)) {
      prev[static_cast<std::size_t>((c.h + 1) * padded_width + c.w + 1)] = anchors.value(i);
    } else {
      update[i] = 1.0;
    }
  }
  std::vector<double> next = prev;

  const simd::SweepProblem problem{height, width, padded_offsets, weights.planes(), divisor, update};
  const auto& k = settings.backend ? simd::kernels(*settings.backend) : simd::kernels();

  MrpResult result{Grid(height, width), 0, false, {}};
  for (int it = 0; it < settings.max_iter; ++it) {
    const double delta = k.sweep(problem, prev, next);
    std::swap(prev, next);
    result.deltas.push_back(delta);
    ++result.iterations;
    if (delta < settings.tol) {
      result.converged = true;
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Cell c = anchors.cell(i);
    result.grid.set(c, prev[static_cast<std::size_t>((c.h + 1) * padded_width + c.w + 1)]);
  }
  return result;
}

MrpResult sd_mrp_run(const Grid& anchors, double gamma, Neighbourhood nb, const MrpSettings& settings) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in (0,1]");
  return mrp_run_weighted(anchors, EdgeWeightSet(anchors.height(), anchors.width(), nb, gamma),
                          settings);
}

std::vector<double> default_gamma_candidates() {
  std::vector<double> out;
  for (int i = 1; i <= 9; ++i) out.push_back(i / 10.0);
  return out;
}

GammaTuning tune_gamma_detailed(const MaskedGrid& train, Neighbourhood nb,
                                const MrpSettings& settings, std::span<const double> candidates) {
  if (candidates.empty()) throw InvalidArgument("tune_gamma needs at least one candidate");
  if (train.hidden().empty()) throw InvalidArgument("tune_gamma needs hidden cells to score");

  GammaTuning out;
  bool first = true;
  for (double gamma : candidates) {
    const double loss = mae(sd_mrp_run(train, gamma, nb, settings).grid, train.truth(), train.hidden());
    out.losses.push_back(loss);
    if (first || loss < out.loss || (loss == out.loss && gamma < out.gamma)) {
      out.gamma = gamma;
      out.loss = loss;
      first = false;
    }
  }
  return out;
}

double tune_gamma(const MaskedGrid& train, Neighbourhood nb, const MrpSettings& settings,
                  std::span<const double> candidates) {
  return tune_gamma_detailed(train, nb, settings, candidates).gamma;
}

}  // namespace gridfill
