#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gridfill/grid.hpp"
#include "gridfill/simd/kernels.hpp"

namespace gridfill {

/// Normalised inverse-distance weights of `sources` for `query`.
/// Throws InvalidArgument when a source coincides with the query.
std::vector<double> idw_weights(Cell query, std::span<const Cell> sources, double power);

/// Shepard interpolation from every observed cell. Missing cells get the
/// weighted mean sum_j w_j y_j / sum_j w_j with w_j = 1 / d_j^power.
/// `backend` pins the kernel; by default the active SIMD backend is used.
Grid idw(const Grid& observed, double power,
         std::optional<simd::Backend> backend = std::nullopt);

inline Grid idw(const MaskedGrid& mg, double power,
                std::optional<simd::Backend> backend = std::nullopt) {
  return idw(mg.visible(), power, backend);
}

}  // namespace gridfill
