#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gridfill/features.hpp"
#include "gridfill/grid.hpp"
#include "gridfill/mrp.hpp"

namespace gridfill {

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

/// Parses a whole field as a finite double; throws IoError otherwise.
double parse_double(const std::string& field);

/// Sparse grid CSV with header `h,w,value`; an empty value is a missing cell.
/// The lattice extent is max(h) + 1 by max(w) + 1 unless given explicitly.
Grid read_grid_csv(const std::filesystem::path& path, int height = 0, int width = 0);
void write_grid_csv(const std::filesystem::path& path, const Grid& g);

/// Dense H x W matrix, comma separated, `NA` for a missing cell.
Grid read_dense_grid(const std::filesystem::path& path);
void write_dense_grid(const std::filesystem::path& path, const Grid& g);

/// Point CSV with header `h,w,type`.
std::vector<PointRecord> read_points_csv(const std::filesystem::path& path);

/// Feature cube as `h,w,feature,value`. Feature order is first appearance.
FeatureCube read_cube_csv(const std::filesystem::path& path);
void write_cube_csv(const std::filesystem::path& path, const FeatureCube& cube);

/// Edge weights as `h_from,w_from,h_to,w_to,weight`.
void write_edge_weights_csv(const std::filesystem::path& path, const EdgeWeightSet& ws);
/// Every edge of the lattice must appear exactly once.
EdgeWeightSet read_edge_weights_csv(const std::filesystem::path& path, int height, int width,
                                    Neighbourhood nb);

/// Minimal CSV table: a header and rows of raw fields. No quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws IoError when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace gridfill
