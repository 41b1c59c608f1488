#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace gridfill {

/// A lattice address: row h, column w.
struct Cell {
  int h = 0;
  int w = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum class Neighbourhood { rook, queen };

std::string_view to_string(Neighbourhood nb);
Neighbourhood parse_neighbourhood(std::string_view text);

struct Offset {
  int dh = 0;
  int dw = 0;
};

/// Neighbour offsets in row-major order. Rook: 4 entries, queen: 8.
std::span<const Offset> neighbour_offsets(Neighbourhood nb);

/// H x W lattice of optional finite reals, stored row-major.
class Grid {
 public:
  /// All cells missing.
  Grid(int height, int width);

  /// Row-major construction; std::nullopt marks a missing cell.
  /// Throws InvalidArgument on a length mismatch or a non-finite value.
  static Grid from_values(int height, int width,
                          std::span<const std::optional<double>> values);

  /// Fully observed grid from dense row-major values.
  static Grid from_dense(int height, int width, std::span<const double> values);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }

  bool contains(Cell c) const noexcept {
    return c.h >= 0 && c.h < height_ && c.w >= 0 && c.w < width_;
  }
  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.h) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.w);
  }
  Cell cell(std::size_t i) const noexcept {
    return {static_cast<int>(i / static_cast<std::size_t>(width_)),
            static_cast<int>(i % static_cast<std::size_t>(width_))};
  }

  bool observed(std::size_t i) const noexcept { return observed_[i] != 0; }
  bool observed(Cell c) const;
  std::optional<double> at(Cell c) const;

  /// Value of an observed cell; throws InvalidArgument if missing or out of bounds.
  double value(Cell c) const;
  double value(std::size_t i) const noexcept { return values_[i]; }

  void set(Cell c, double v);
  void clear(Cell c);

  std::size_t observed_count() const noexcept;
  bool fully_observed() const noexcept { return observed_count() == size(); }

  /// Raw storage; missing cells read as 0.
  std::span<const double> raw_values() const noexcept { return values_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int height_;
  int width_;
  std::vector<double> values_;
  std::vector<std::uint8_t> observed_;
};

/// Ground truth, the visible grid, and the set of artificially hidden cells.
///
/// visible[c] is missing exactly when c is hidden or truth[c] is missing.
/// The truth is observed on every hidden cell. Training splits carved out of
/// an already-masked grid may leave other truth cells missing; masks built
/// by hide_values always have a fully observed truth.
class MaskedGrid {
 public:
  /// Hides an explicit set of cells. Throws if a cell is out of bounds,
  /// repeated, or unobserved in the truth.
  static MaskedGrid from_hidden(Grid truth, std::vector<Cell> hidden, double p = 0.0,
                                std::uint64_t seed = 0);

  const Grid& truth() const noexcept { return truth_; }
  const Grid& visible() const noexcept { return visible_; }
  /// Hidden cells in row-major order.
  const std::vector<Cell>& hidden() const noexcept { return hidden_; }
  double p() const noexcept { return p_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  MaskedGrid(Grid truth, Grid visible, std::vector<Cell> hidden, double p,
             std::uint64_t seed);

  Grid truth_;
  Grid visible_;
  std::vector<Cell> hidden_;
  double p_;
  std::uint64_t seed_;
};

/// round(p * n) with halves rounded up.
std::size_t hidden_count(double p, std::size_t n);

/// Hides round(p * H * W) cells of a fully observed grid, drawn uniformly
/// without replacement by a partial Fisher-Yates shuffle driven by Rng(seed).
MaskedGrid hide_values(const Grid& truth, double p, std::uint64_t seed);

/// Same draw restricted to the observed cells of a partially observed grid.
/// Used to carve a training split out of the visible part of a mask.
MaskedGrid hide_observed(const Grid& grid, double p, std::uint64_t seed);

/// In-bounds neighbours of c in row-major order.
std::vector<Cell> neighbours(Cell c, Neighbourhood nb, int height, int width);

enum class Imputation { mean_substitution };

/// Binary-adjacency neighbour sum (M * y) for every cell, row-major.
/// Missing values are replaced by the mean of the observed cells first.
std::vector<double> spatial_lag(const Grid& g, Neighbourhood nb,
                                Imputation imputation = Imputation::mean_substitution);

/// Mean absolute error of pred against truth over eval_cells.
double mae(const Grid& pred, const Grid& truth, std::span<const Cell> eval_cells);

}  // namespace gridfill
