#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mdf {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class MissingParameter : public Error {
 public:
  using Error::Error;
};

/// Raised when a curvature correction (1 - c r^2)^-1 has a non-positive
/// denominator at the requested radius.
class SingularScaling : public Error {
 public:
  SingularScaling(const std::string& what, double radius)
      : Error(what), radius_(radius) {}
  double radius() const noexcept { return radius_; }

 private:
  double radius_;
};

class NoCandidate : public Error {
 public:
  using Error::Error;
};

class BoundaryError : public Error {
 public:
  using Error::Error;
};

class EmptyErosion : public Error {
 public:
  using Error::Error;
};

/// Disconnected neighbor graph. `witnesses` holds one vertex per component.
class ConnectivityError : public Error {
 public:
  ConnectivityError(const std::string& what, std::vector<std::size_t> witnesses)
      : Error(what), witnesses_(std::move(witnesses)) {}
  const std::vector<std::size_t>& witnesses() const noexcept { return witnesses_; }

 private:
  std::vector<std::size_t> witnesses_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// DistanceMatrix
// ---------------------------------------------------------------------------

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kDiagonalTolerance = 1e-12;

/// Square symmetric matrix of pairwise distances with zero diagonal.
/// Only obtainable through validate_distance_matrix, so every instance
/// satisfies the metric-matrix invariants.
class DistanceMatrix {
 public:
  std::size_t size() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * m_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {entries_.data() + i * m_, m_};
  }
  std::span<const double> entries() const noexcept { return entries_; }

  friend DistanceMatrix validate_distance_matrix(std::span<const double>, std::size_t,
                                                 std::size_t, bool);

 private:
  DistanceMatrix(std::size_t m, std::vector<double> entries)
      : m_(m), entries_(std::move(entries)) {}

  std::size_t m_ = 0;
  std::vector<double> entries_;
};

/// Validates a row-major rows x cols matrix as a distance matrix.
///
/// With `symmetrize`, each pair is replaced by the mean of its two directed
/// entries before validation. Without it, pairs may differ by at most
/// kSymmetryTolerance; such near-symmetric pairs are stored as their mean so
/// that the result is exactly symmetric. Diagonal entries within
/// kDiagonalTolerance of zero are stored as exactly zero.
inline DistanceMatrix validate_distance_matrix(std::span<const double> raw, std::size_t rows,
                                               std::size_t cols, bool symmetrize) {
  if (rows != cols || raw.size() != rows * cols) {
    throw ShapeError("distance matrix must be square, got " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  if (rows == 0) throw ShapeError("distance matrix must not be empty");
  const std::size_t m = rows;
  std::vector<double> out(raw.begin(), raw.end());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = out[i * m + j];
      if (!std::isfinite(v)) {
        throw ValidationError("non-finite distance at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
      if (v < 0.0) {
        throw ValidationError("negative distance at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    double& d = out[i * m + i];
    if (std::abs(d) > kDiagonalTolerance) {
      throw ValidationError("nonzero diagonal at " + std::to_string(i));
    }
    d = 0.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      double& a = out[i * m + j];
      double& b = out[j * m + i];
      if (!symmetrize && std::abs(a - b) > kSymmetryTolerance) {
        throw ValidationError("asymmetric entries at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
      if (a != b) {
        const double mean = 0.5 * (a + b);
        a = mean;
        b = mean;
      }
    }
  }
  return DistanceMatrix(m, std::move(out));
}

inline DistanceMatrix validate_distance_matrix(const std::vector<std::vector<double>>& raw,
                                               bool symmetrize) {
  const std::size_t rows = raw.size();
  std::vector<double> flat;
  flat.reserve(rows * rows);
  for (const auto& r : raw) {
    if (r.size() != rows) {
      throw ShapeError("distance matrix must be square: row of length " +
                       std::to_string(r.size()) + " in " + std::to_string(rows) + " rows");
    }
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return validate_distance_matrix(flat, rows, rows, symmetrize);
}

// ---------------------------------------------------------------------------
// RadiusGrid and DensityFunction
// ---------------------------------------------------------------------------

/// Strictly increasing positive radii (at least two) ending at r_max.
class RadiusGrid {
 public:
  static RadiusGrid from_radii(std::vector<double> radii) {
    if (radii.size() < 2) throw InvalidArgument("radius grid needs at least 2 radii");
    if (!(radii.front() > 0.0)) throw InvalidArgument("radii must be positive");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (!std::isfinite(radii[i])) throw InvalidArgument("radii must be finite");
      if (i > 0 && !(radii[i] > radii[i - 1])) {
        throw InvalidArgument("radii must be strictly increasing");
      }
    }
    return RadiusGrid(std::move(radii));
  }

  std::size_t size() const noexcept { return radii_.size(); }
  double operator[](std::size_t i) const noexcept { return radii_[i]; }
  double r_max() const noexcept { return radii_.back(); }
  std::span<const double> radii() const noexcept { return radii_; }

  friend bool operator==(const RadiusGrid&, const RadiusGrid&) = default;

 private:
  explicit RadiusGrid(std::vector<double> radii) : radii_(std::move(radii)) {}
  std::vector<double> radii_;
};

/// Linearly spaced radii r_max*(i+1)/steps, i = 0..steps-1.
inline RadiusGrid build_radius_grid(double r_max, std::size_t steps) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw InvalidArgument("r_max must be a positive finite real");
  }
  if (steps < 2) throw InvalidArgument("grid needs at least 2 steps");
  std::vector<double> radii(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    radii[i] = r_max * static_cast<double>(i + 1) / static_cast<double>(steps);
  }
  radii.back() = r_max;
  return RadiusGrid::from_radii(std::move(radii));
}

/// A K-function sampled on a radius grid.
class DensityFunction {
 public:
  DensityFunction(RadiusGrid grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw InvalidArgument("density function needs one value per grid radius");
    }
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument("density function values must be finite and nonnegative");
      }
    }
  }

  const RadiusGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  RadiusGrid grid_;
  std::vector<double> values_;
};

/// Euclidean norm of the grid-sampled difference, sqrt(sum_i (f_i - g_i)^2).
/// No radial quadrature weights are applied.
inline double l2_function_distance(const DensityFunction& f, const DensityFunction& g) {
  if (!(f.grid() == g.grid())) {
    throw InvalidArgument("l2_function_distance: functions live on different grids");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f[i] - g[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// ManifoldModel
// ---------------------------------------------------------------------------

namespace curvature {

struct Flat {};

/// Scalar curvature supplied per sample point (indexed like the distance matrix).
struct PointwiseScalar {
  std::vector<double> values;
};

/// Surface with Euler characteristic chi. With `area` the exact Gauss-Bonnet
/// average is used; without it, the area-free heuristic.
struct Surface {
  int chi = 0;
  std::optional<double> area;
};

struct Hypersurface {
  double lambda1 = 0.0;
};

}  // namespace curvature

using Curvature = std::variant<curvature::Flat, curvature::PointwiseScalar, curvature::Surface,
                               curvature::Hypersurface>;

/// Declared properties of the latent manifold.
class ManifoldModel {
 public:
  explicit ManifoldModel(int dimension, std::optional<double> volume = std::nullopt,
                         Curvature curv = curvature::Flat{})
      : dimension_(dimension), volume_(volume), curvature_(std::move(curv)) {
    if (dimension_ < 1) throw InvalidArgument("manifold dimension must be >= 1");
    if (volume_ && !(*volume_ > 0.0 && std::isfinite(*volume_))) {
      throw InvalidArgument("manifold volume must be positive");
    }
    if (const auto* s = std::get_if<curvature::Surface>(&curvature_)) {
      if (dimension_ != 2) throw InvalidArgument("surface curvature requires dimension 2");
      if (s->area && !(*s->area > 0.0)) throw InvalidArgument("surface area must be positive");
    }
    if (const auto* h = std::get_if<curvature::Hypersurface>(&curvature_)) {
      if (!(h->lambda1 > 0.0)) throw InvalidArgument("lambda1 must be positive");
      if (dimension_ < 2) throw InvalidArgument("hypersurface scaling requires dimension >= 2");
    }
  }

  int dimension() const noexcept { return dimension_; }
  const std::optional<double>& volume() const noexcept { return volume_; }
  const Curvature& curvature() const noexcept { return curvature_; }

  bool is_flat() const noexcept { return std::holds_alternative<curvature::Flat>(curvature_); }

 private:
  int dimension_;
  std::optional<double> volume_;
  Curvature curvature_;
};

// ---------------------------------------------------------------------------
// PointSample
// ---------------------------------------------------------------------------

/// m points in R^d stored row-major, with the provenance of their generation.
class PointSample {
 public:
  PointSample(std::size_t m, std::size_t d, std::vector<double> coords, std::uint64_t seed = 0,
              std::string sampler = "external")
      : m_(m), d_(d), coords_(std::move(coords)), seed_(seed), sampler_(std::move(sampler)) {
    if (m_ < 1 || d_ < 1) throw InvalidArgument("point sample needs m >= 1 and d >= 1");
    if (coords_.size() != m_ * d_) throw ShapeError("point sample coordinate count mismatch");
    for (double c : coords_) {
      if (!std::isfinite(c)) throw ValidationError("point sample has a non-finite coordinate");
    }
  }

  std::size_t size() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return d_; }
  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * d_, d_};
  }
  double operator()(std::size_t i, std::size_t k) const noexcept { return coords_[i * d_ + k]; }
  std::span<const double> coords() const noexcept { return coords_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& sampler() const noexcept { return sampler_; }

 private:
  std::size_t m_;
  std::size_t d_;
  std::vector<double> coords_;
  std::uint64_t seed_;
  std::string sampler_;
};

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Pairwise Euclidean distances between the rows of a sample.
inline DistanceMatrix euclidean_distance_matrix(const PointSample& pts) {
  const std::size_t m = pts.size();
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = euclidean_distance(pts.point(i), pts.point(j));
      d[i * m + j] = v;
      d[j * m + i] = v;
    }
  }
  return validate_distance_matrix(d, m, m, false);
}

/// Linear-interpolation quantile (q in [0,1]) of the strictly positive
/// off-diagonal distances. Returns 0 if there are none.
inline double positive_distance_quantile(const DistanceMatrix& d, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile must lie in [0,1]");
  std::vector<double> vals;
  const std::size_t m = d.size();
  vals.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (d(i, j) > 0.0) vals.push_back(d(i, j));
    }
  }
  if (vals.empty()) return 0.0;
  const double pos = q * static_cast<double>(vals.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(lo), vals.end());
  const double a = vals[lo];
  if (frac == 0.0 || lo + 1 >= vals.size()) return a;
  const double b = *std::min_element(vals.begin() + static_cast<std::ptrdiff_t>(lo) + 1, vals.end());
  return a + frac * (b - a);
}

}  // namespace mdf
