#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gridfill/grid.hpp"
#include "gridfill/simd/kernels.hpp"

namespace gridfill {

/// A directed neighbour pair: `from` feeds its estimate into `to`.
struct Edge {
  Cell from;
  Cell to;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// One weight in [0, 1] per directed neighbour pair of an H x W lattice.
///
/// Stored as one plane per neighbour offset: plane k holds, for every cell,
/// the weight of the edge arriving from the neighbour at offset k. Entries
/// for out-of-bounds neighbours are zero and are not part of the set.
class EdgeWeightSet {
 public:
  EdgeWeightSet(int height, int width, Neighbourhood nb, double fill = 0.0);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  Neighbourhood neighbourhood() const noexcept { return nb_; }

  /// Number of directed edges.
  std::size_t size() const noexcept { return edges_.size(); }

  /// Edges ordered by destination (row-major), then by neighbour offset.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Throws InvalidArgument if the cells are not neighbours in this lattice.
  double weight(Cell from, Cell to) const;
  void set_weight(Cell from, Cell to, double w);

  /// Weights in edges() order.
  std::vector<double> flatten() const;
  /// Inverse of flatten(); every value must lie in [0, 1].
  void assign(std::span<const double> flat);

  std::span<const double> planes() const noexcept { return planes_; }

  friend bool operator==(const EdgeWeightSet&, const EdgeWeightSet&) = default;

 private:
  std::size_t slot(Cell from, Cell to) const;

  int height_;
  int width_;
  Neighbourhood nb_;
  std::vector<double> planes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> edge_slots_;
};

enum class Aggregation { sum, mean };

std::string_view to_string(Aggregation a);
Aggregation parse_aggregation(std::string_view text);

struct MrpSettings {
  Aggregation aggregation = Aggregation::mean;
  int max_iter = 100;
  double tol = 1e-6;
  /// Kernel override; the active SIMD backend when empty.
  std::optional<simd::Backend> backend;
};

struct MrpResult {
  Grid grid;
  int iterations = 0;
  bool converged = false;
  /// Max absolute change of each sweep.
  std::vector<double> deltas;
};

/// Weighted MRP iteration with observed cells as fixed anchors.
///
/// Missing cells start at 0 and are updated synchronously (Jacobi): each
/// sweep reads only the previous iterate. A missing cell becomes
/// sum_j w(j -> i) * y_j over its neighbours, divided by the neighbour count
/// under mean aggregation. Stops when the max change drops below tol or
/// after max_iter sweeps. Throws InvalidArgument when nothing is observed or
/// the weight set does not match the grid shape.
MrpResult mrp_run_weighted(const Grid& anchors, const EdgeWeightSet& weights,
                           const MrpSettings& settings = {});

/// Static-discount MRP: every edge weighted by gamma in (0, 1].
MrpResult sd_mrp_run(const Grid& anchors, double gamma, Neighbourhood nb,
                     const MrpSettings& settings = {});

inline MrpResult mrp_run_weighted(const MaskedGrid& mg, const EdgeWeightSet& weights,
                                  const MrpSettings& settings = {}) {
  return mrp_run_weighted(mg.visible(), weights, settings);
}

inline MrpResult sd_mrp_run(const MaskedGrid& mg, double gamma, Neighbourhood nb,
                            const MrpSettings& settings = {}) {
  return sd_mrp_run(mg.visible(), gamma, nb, settings);
}

/// 0.1, 0.2, ..., 0.9.
std::vector<double> default_gamma_candidates();

struct GammaTuning {
  double gamma = 0.0;
  double loss = 0.0;
  std::vector<double> losses;  // per candidate, in input order
};

/// Runs SD-MRP for each candidate and keeps the one with the lowest MAE over
/// the hidden cells of the training mask. Ties go to the smaller gamma.
GammaTuning tune_gamma_detailed(const MaskedGrid& train, Neighbourhood nb,
                                const MrpSettings& settings, std::span<const double> candidates);

double tune_gamma(const MaskedGrid& train, Neighbourhood nb, const MrpSettings& settings,
                  std::span<const double> candidates);

}  // namespace gridfill
