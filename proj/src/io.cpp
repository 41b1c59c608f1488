#include "gridfill/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gridfill/error.hpp"

namespace gridfill {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t\r");
    const auto e = f.find_last_not_of(" \t\r");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

int parse_int(const std::string& field) {
  int v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) throw IoError("not an integer: '" + field + "'");
  return v;
}

void require_header(const CsvTable& t, std::initializer_list<const char*> names,
                    const std::filesystem::path& path) {
  std::vector<std::string> want(names.begin(), names.end());
  if (t.header != want) {
    std::string joined;
    for (const auto& n : want) joined += (joined.empty() ? "" : ",") + n;
    throw IoError(path.string() + ": expected header '" + joined + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_double failed");
  return {buf, ptr};
}

double parse_double(const std::string& field) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw IoError("not a finite number: '" + field + "'");
  }
  return v;
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw IoError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(t.header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw IoError(path.string() + ": empty file");
  return t;
}

Grid read_grid_csv(const std::filesystem::path& path, int height, int width) {
  const CsvTable t = read_csv(path);
  require_header(t, {"h", "w", "value"}, path);
  int max_h = -1, max_w = -1;
  std::vector<std::tuple<int, int, std::string>> cells;
  for (const auto& r : t.rows) {
    const int h = parse_int(r[0]);
    const int w = parse_int(r[1]);
    if (h < 0 || w < 0) throw IoError(path.string() + ": negative cell index");
    max_h = std::max(max_h, h);
    max_w = std::max(max_w, w);
    cells.emplace_back(h, w, r[2]);
  }
  if (height <= 0) height = max_h + 1;
  if (width <= 0) width = max_w + 1;
  if (height <= 0 || width <= 0) throw IoError(path.string() + ": no cells");
  if (max_h >= height || max_w >= width) throw IoError(path.string() + ": cell outside the lattice");
  Grid g(height, width);
  std::set<std::pair<int, int>> seen;
  for (const auto& [h, w, v] : cells) {
    if (!seen.insert({h, w}).second) {
      throw IoError(path.string() + ": duplicate cell (" + std::to_string(h) + "," + std::to_string(w) + ")");
    }
    if (!v.empty()) g.set({h, w}, parse_double(v));
  }
  return g;
}

void write_grid_csv(const std::filesystem::path& path, const Grid& g) {
  auto out = open_out(path);
  out << "h,w,value\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell c = g.cell(i);
    out << c.h << ',' << c.w << ',';
    if (g.observed(i)) out << format_double(g.value(i));
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Grid read_dense_grid(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split(line));
    if (rows.back().size() != rows.front().size()) throw IoError(path.string() + ": ragged matrix");
  }
  if (rows.empty()) throw IoError(path.string() + ": empty matrix");
  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size());
  Grid g(height, width);
  for (int h = 0; h < height; ++h) {
    for (int w = 0; w < width; ++w) {
      const auto& f = rows[static_cast<std::size_t>(h)][static_cast<std::size_t>(w)];
      if (f != "NA") g.set({h, w}, parse_double(f));
    }
  }
  return g;
}

void write_dense_grid(const std::filesystem::path& path, const Grid& g) {
  auto out = open_out(path);
  for (int h = 0; h < g.height(); ++h) {
    for (int w = 0; w < g.width(); ++w) {
      if (w) out << ',';
      const auto v = g.at({h, w});
      out << (v ? format_double(*v) : std::string("NA"));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<PointRecord> read_points_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  require_header(t, {"h", "w", "type"}, path);
  std::vector<PointRecord> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back({parse_double(r[0]), parse_double(r[1]), r[2]});
  return out;
}

FeatureCube read_cube_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  require_header(t, {"h", "w", "feature", "value"}, path);
  std::vector<std::string> names;
  std::map<std::string, std::size_t> slot;
  std::map<std::tuple<int, int, std::size_t>, double> values;
  int max_h = -1, max_w = -1;
  for (const auto& r : t.rows) {
    const int h = parse_int(r[0]);
    const int w = parse_int(r[1]);
    if (h < 0 || w < 0) throw IoError(path.string() + ": negative cell index");
    auto [it, fresh] = slot.emplace(r[2], names.size());
    if (fresh) names.push_back(r[2]);
    if (!values.emplace(std::tuple{h, w, it->second}, parse_double(r[3])).second) {
      throw IoError(path.string() + ": duplicate entry for feature '" + r[2] + "'");
    }
    max_h = std::max(max_h, h);
    max_w = std::max(max_w, w);
  }
  const int height = max_h + 1;
  const int width = max_w + 1;
  const std::size_t f = names.size();
  const std::size_t expected = static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * f;
  if (f == 0 || values.size() != expected) {
    throw IoError(path.string() + ": cube is incomplete (" + std::to_string(values.size()) + " of " +
                  std::to_string(expected) + " entries)");
  }
  std::vector<double> data(expected);
  for (const auto& [key, v] : values) {
    const auto [h, w, k] = key;
    data[(static_cast<std::size_t>(h) * static_cast<std::size_t>(width) + static_cast<std::size_t>(w)) * f + k] = v;
  }
  return FeatureCube(height, width, std::move(names), std::move(data));
}

void write_cube_csv(const std::filesystem::path& path, const FeatureCube& cube) {
  auto out = open_out(path);
  out << "h,w,feature,value\n";
  for (int h = 0; h < cube.height(); ++h) {
    for (int w = 0; w < cube.width(); ++w) {
      const auto x = cube.features({h, w});
      for (std::size_t k = 0; k < x.size(); ++k) {
        out << h << ',' << w << ',' << cube.names()[k] << ',' << format_double(x[k]) << '\n';
      }
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void write_edge_weights_csv(const std::filesystem::path& path, const EdgeWeightSet& ws) {
  auto out = open_out(path);
  out << "h_from,w_from,h_to,w_to,weight\n";
  const auto flat = ws.flatten();
  for (std::size_t e = 0; e < flat.size(); ++e) {
    const Edge& edge = ws.edges()[e];
    out << edge.from.h << ',' << edge.from.w << ',' << edge.to.h << ',' << edge.to.w << ','
        << format_double(flat[e]) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

EdgeWeightSet read_edge_weights_csv(const std::filesystem::path& path, int height, int width,
                                    Neighbourhood nb) {
  const CsvTable t = read_csv(path);
  require_header(t, {"h_from", "w_from", "h_to", "w_to", "weight"}, path);
  EdgeWeightSet ws(height, width, nb);
  std::set<Edge> seen;
  for (const auto& r : t.rows) {
    const Edge e{{parse_int(r[0]), parse_int(r[1])}, {parse_int(r[2]), parse_int(r[3])}};
    try {
      ws.set_weight(e.from, e.to, parse_double(r[4]));
    } catch (const InvalidArgument& ex) {
      throw IoError(path.string() + ": " + ex.what());
    }
    if (!seen.insert(e).second) throw IoError(path.string() + ": duplicate edge");
  }
  if (seen.size() != ws.size()) {
    throw IoError(path.string() + ": expected " + std::to_string(ws.size()) + " edges, got " +
                  std::to_string(seen.size()));
  }
  return ws;
}

}  // namespace gridfill
