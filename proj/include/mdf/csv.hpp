#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace mdf::csv {

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Fixed-point representation with `digits` decimals.
inline std::string format_fixed(double v, int digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct Table {
  std::vector<std::string> header;  // empty when the file has no header row
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
};

/// Reads a numeric CSV. A first row containing any non-numeric field is
/// taken as the header. Blank lines are skipped.
inline Table read_table(std::istream& in, const std::string& source = "<stream>") {
  Table t;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (auto f : fields) {
      const auto v = parse_double(f);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (first) {
        for (auto f : fields) t.header.emplace_back(f);
        t.cols = fields.size();
        first = false;
        continue;
      }
      throw ValidationError(source + ":" + std::to_string(lineno) + ": non-numeric field");
    }
    if (first) {
      t.cols = row.size();
      first = false;
    }
    if (row.size() != t.cols) {
      throw ShapeError(source + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(t.cols) + " fields, got " + std::to_string(row.size()));
    }
    t.values.insert(t.values.end(), row.begin(), row.end());
    ++t.rows;
  }
  return t;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  return out;
}

inline Table read_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_table(in, path.string());
}

// --- DistanceMatrix: no header, m rows of m values ---------------------------

inline DistanceMatrix read_distance_matrix(std::istream& in, bool symmetrize = false) {
  const Table t = read_table(in);
  if (!t.header.empty()) throw ValidationError("distance matrix CSV must not have a header");
  return validate_distance_matrix(t.values, t.rows, t.cols, symmetrize);
}

inline DistanceMatrix read_distance_matrix(const std::filesystem::path& path,
                                           bool symmetrize = false) {
  auto in = open_input(path);
  return read_distance_matrix(in, symmetrize);
}

inline void write_distance_matrix(std::ostream& out, const DistanceMatrix& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (j) out << ',';
      out << format_double(d(i, j));
    }
    out << '\n';
  }
}

// --- PointSample: header x0,...,x{d-1} ------------------------------------------

inline PointSample read_point_sample(std::istream& in, const std::string& source = "<stream>") {
  Table t = read_table(in, source);
  if (t.header.empty()) throw ValidationError(source + ": point CSV needs an x0,...,x{d-1} header");
  for (std::size_t k = 0; k < t.header.size(); ++k) {
    if (t.header[k] != "x" + std::to_string(k)) {
      throw ValidationError(source + ": unexpected column '" + t.header[k] + "'");
    }
  }
  if (t.rows == 0) throw ValidationError(source + ": point CSV has no rows");
  return PointSample(t.rows, t.cols, std::move(t.values), 0, "csv:" + source);
}

inline PointSample read_point_sample(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_point_sample(in, path.string());
}

inline void write_point_sample(std::ostream& out, const PointSample& pts) {
  for (std::size_t k = 0; k < pts.dimension(); ++k) {
    if (k) out << ',';
    out << 'x' << k;
  }
  out << '\n';
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = 0; k < pts.dimension(); ++k) {
      if (k) out << ',';
      out << format_double(pts(i, k));
    }
    out << '\n';
  }
}

// --- DensityFunction: header r,value ----------------------------------------------

inline void write_density_function(std::ostream& out, const DensityFunction& f) {
  out << "r,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << format_double(f.grid()[i]) << ',' << format_double(f[i]) << '\n';
  }
}

inline DensityFunction read_density_function(std::istream& in) {
  const Table t = read_table(in);
  if (t.header != std::vector<std::string>{"r", "value"}) {
    throw ValidationError("density function CSV needs an r,value header");
  }
  std::vector<double> r(t.rows);
  std::vector<double> v(t.rows);
  for (std::size_t i = 0; i < t.rows; ++i) {
    r[i] = t.values[2 * i];
    v[i] = t.values[2 * i + 1];
  }
  return DensityFunction(RadiusGrid::from_radii(std::move(r)), std::move(v));
}

/// Theoretical and estimated functions side by side: r,theoretical,estimate.
inline void write_function_pair(std::ostream& out, const DensityFunction& theo,
                                const DensityFunction& est) {
  out << "r,theoretical,estimate\n";
  for (std::size_t i = 0; i < theo.size(); ++i) {
    out << format_double(theo.grid()[i]) << ',' << format_double(theo[i]) << ','
        << format_double(est[i]) << '\n';
  }
}

// --- Weights: single column ------------------------------------------------------------

inline std::vector<double> read_weights(std::istream& in) {
  const Table t = read_table(in);
  if (t.cols != 1) throw ShapeError("weights CSV must have exactly one column");
  return t.values;
}

inline std::vector<double> read_weights(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_weights(in);
}

}  // namespace mdf::csv
