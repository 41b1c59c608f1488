#include "gridfill/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "gridfill/error.hpp"
#include "gridfill/rng.hpp"

namespace gridfill {

namespace {

constexpr std::array<Offset, 4> kRook{{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};
constexpr std::array<Offset, 8> kQueen{
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};

void check_shape(int height, int width) {
  if (height <= 0 || width <= 0) {
    throw InvalidArgument("grid dimensions must be positive, got " + std::to_string(height) +
                          "x" + std::to_string(width));
  }
}

std::string cell_text(Cell c) {
  return "(" + std::to_string(c.h) + "," + std::to_string(c.w) + ")";
}

}  // namespace

std::string_view to_string(Neighbourhood nb) {
  return nb == Neighbourhood::rook ? "rook" : "queen";
}

Neighbourhood parse_neighbourhood(std::string_view text) {
  if (text == "rook") return Neighbourhood::rook;
  if (text == "queen") return Neighbourhood::queen;
  throw InvalidArgument("unknown neighbourhood '" + std::string(text) + "'");
}

std::span<const Offset> neighbour_offsets(Neighbourhood nb) {
  if (nb == Neighbourhood::rook) return kRook;
  return kQueen;
}

Grid::Grid(int height, int width) : height_(height), width_(width) {
  check_shape(height, width);
  const auto n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  values_.assign(n, 0.0);
  observed_.assign(n, 0);
}

Grid Grid::from_values(int height, int width,
                       std::span<const std::optional<double>> values) {
  Grid g(height, width);
  if (values.size() != g.size()) {
    throw InvalidArgument("grid length mismatch: expected " + std::to_string(g.size()) +
                          " values, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i]) g.set(g.cell(i), *values[i]);
  }
  return g;
}

Grid Grid::from_dense(int height, int width, std::span<const double> values) {
  Grid g(height, width);
  if (values.size() != g.size()) {
    throw InvalidArgument("grid length mismatch: expected " + std::to_string(g.size()) +
                          " values, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) g.set(g.cell(i), values[i]);
  return g;
}

bool Grid::observed(Cell c) const {
  if (!contains(c)) throw InvalidArgument("cell " + cell_text(c) + " out of bounds");
  return observed_[index(c)] != 0;
}

std::optional<double> Grid::at(Cell c) const {
  if (!observed(c)) return std::nullopt;
  return values_[index(c)];
}

double Grid::value(Cell c) const {
  if (!observed(c)) throw InvalidArgument("cell " + cell_text(c) + " is missing");
  return values_[index(c)];
}

void Grid::set(Cell c, double v) {
  if (!contains(c)) throw InvalidArgument("cell " + cell_text(c) + " out of bounds");
  if (!std::isfinite(v)) {
    throw InvalidArgument("non-finite value at cell " + cell_text(c));
  }
  values_[index(c)] = v;
  observed_[index(c)] = 1;
}

void Grid::clear(Cell c) {
  if (!contains(c)) throw InvalidArgument("cell " + cell_text(c) + " out of bounds");
  values_[index(c)] = 0.0;
  observed_[index(c)] = 0;
}

std::size_t Grid::observed_count() const noexcept {
  return static_cast<std::size_t>(std::count(observed_.begin(), observed_.end(), 1));
}

MaskedGrid::MaskedGrid(Grid truth, Grid visible, std::vector<Cell> hidden, double p,
                       std::uint64_t seed)
    : truth_(std::move(truth)),
      visible_(std::move(visible)),
      hidden_(std::move(hidden)),
      p_(p),
      seed_(seed) {}

MaskedGrid MaskedGrid::from_hidden(Grid truth, std::vector<Cell> hidden, double p,
                                   std::uint64_t seed) {
  std::sort(hidden.begin(), hidden.end());
  if (std::adjacent_find(hidden.begin(), hidden.end()) != hidden.end()) {
    throw InvalidArgument("hidden set contains a repeated cell");
  }
  Grid visible = truth;
  for (Cell c : hidden) {
    if (!truth.observed(c)) {
      throw InvalidArgument("hidden cell " + cell_text(c) + " has no ground truth");
    }
    visible.clear(c);
  }
  return MaskedGrid(std::move(truth), std::move(visible), std::move(hidden), p, seed);
}

std::size_t hidden_count(double p, std::size_t n) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("hiding proportion must lie in [0,1], got " + std::to_string(p));
  }
  return static_cast<std::size_t>(std::floor(p * static_cast<double>(n) + 0.5));
}

MaskedGrid hide_observed(const Grid& grid, double p, std::uint64_t seed) {
  std::vector<std::size_t> pool;
  pool.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.observed(i)) pool.push_back(i);
  }
  const std::size_t k = hidden_count(p, pool.size());

  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<Cell> hidden;
  hidden.reserve(k);
  for (std::size_t i = 0; i < k; ++i) hidden.push_back(grid.cell(pool[i]));
  return MaskedGrid::from_hidden(grid, std::move(hidden), p, seed);
}

MaskedGrid hide_values(const Grid& truth, double p, std::uint64_t seed) {
  if (!truth.fully_observed()) {
    throw InvalidArgument("hide_values requires a fully observed grid");
  }
  return hide_observed(truth, p, seed);
}

std::vector<Cell> neighbours(Cell c, Neighbourhood nb, int height, int width) {
  if (c.h < 0 || c.h >= height || c.w < 0 || c.w >= width) {
    throw InvalidArgument("cell " + cell_text(c) + " out of bounds");
  }
  std::vector<Cell> out;
  for (const Offset& o : neighbour_offsets(nb)) {
    const Cell n{c.h + o.dh, c.w + o.dw};
    if (n.h >= 0 && n.h < height && n.w >= 0 && n.w < width) out.push_back(n);
  }
  return out;
}

std::vector<double> spatial_lag(const Grid& g, Neighbourhood nb, Imputation) {
  const std::size_t n_obs = g.observed_count();
  if (n_obs == 0) throw InvalidArgument("spatial_lag needs at least one observed cell");

  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.observed(i)) total += g.value(i);
  }
  const double mean = total / static_cast<double>(n_obs);

  std::vector<double> filled(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) filled[i] = g.observed(i) ? g.value(i) : mean;

  std::vector<double> lag(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell c = g.cell(i);
    double acc = 0.0;
    for (const Offset& o : neighbour_offsets(nb)) {
      const Cell n{c.h + o.dh, c.w + o.dw};
      if (g.contains(n)) acc += filled[g.index(n)];
    }
    lag[i] = acc;
  }
  return lag;
}

double mae(const Grid& pred, const Grid& truth, std::span<const Cell> eval_cells) {
  if (pred.height() != truth.height() || pred.width() != truth.width()) {
    throw InvalidArgument("mae: prediction and truth shapes differ");
  }
  if (eval_cells.empty()) throw InvalidArgument("mae: empty evaluation set");
  // Summed in row-major order so the result does not depend on how the caller
  // enumerated the cells.
  std::vector<Cell> cells(eval_cells.begin(), eval_cells.end());
  std::sort(cells.begin(), cells.end());
  double total = 0.0;
  for (Cell c : cells) {
    if (!pred.observed(c)) {
      throw InvalidArgument("mae: missing prediction at " + cell_text(c));
    }
    total += std::abs(pred.value(c) - truth.value(c));
  }
  return total / static_cast<double>(eval_cells.size());
}

}  // namespace gridfill
