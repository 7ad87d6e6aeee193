#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"

namespace mdf {

/// Volume of the open Euclidean n-ball of radius r: pi^(n/2) r^n / Gamma(n/2 + 1).
inline double euclidean_ball_volume(int n, double r) {
  if (n < 1) throw InvalidArgument("ball dimension must be >= 1");
  if (!(r >= 0.0)) throw InvalidArgument("ball radius must be nonnegative");
  const double half = 0.5 * static_cast<double>(n);
  return std::pow(std::numbers::pi, half) * std::pow(r, n) / std::tgamma(half + 1.0);
}

/// Surface measure of the unit n-sphere S^n in R^(n+1).
inline double unit_sphere_volume(int n) {
  if (n < 1) throw InvalidArgument("sphere dimension must be >= 1");
  const double h = 0.5 * static_cast<double>(n + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

/// K_X(r) = vol(B(0,r)) / vol(X) sampled on the grid.
inline DensityFunction theoretical_mdf(const ManifoldModel& model, const RadiusGrid& grid) {
  if (!model.volume()) throw MissingParameter("theoretical MDF needs the manifold volume");
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = euclidean_ball_volume(model.dimension(), grid[i]) / *model.volume();
  }
  return DensityFunction(grid, std::move(values));
}

namespace detail {

inline double invert_or_throw(double denom, double r, const char* what) {
  if (!(denom > 0.0)) {
    throw SingularScaling(std::string(what) + ": non-positive denominator at r=" +
                              std::to_string(r),
                          r);
  }
  return 1.0 / denom;
}

}  // namespace detail

/// (1 - Sc r^2 / (6(n+2)))^-1, the pointwise ball-volume correction.
inline double local_curvature_factor(double sc, int n, double r) {
  if (n < 1) throw InvalidArgument("dimension must be >= 1");
  return detail::invert_or_throw(1.0 - sc * r * r / (6.0 * (n + 2)), r, "local curvature factor");
}

/// Euler-characteristic correction for surfaces.
///
/// With the area known: (1 - pi chi r^2 / (6A))^-1, the surface average of
/// the local factor under Gauss-Bonnet (Sc = 2G, integral of G = 2 pi chi).
/// Without it: the area-free heuristic (1 - pi chi / 24)^-1.
inline double surface_aggregate_factor(int chi, double r, std::optional<double> area = {}) {
  const double pi = std::numbers::pi;
  if (area) {
    if (!(*area > 0.0)) throw InvalidArgument("surface area must be positive");
    return detail::invert_or_throw(1.0 - pi * chi * r * r / (6.0 * *area), r,
                                   "surface aggregate factor");
  }
  return detail::invert_or_throw(1.0 - pi * chi / 24.0, r, "surface aggregate factor");
}

/// (1 - r^2 lambda1 (n-1) / (12 n (n+2)))^-1 for n-dimensional hypersurfaces.
inline double hypersurface_aggregate_factor(double lambda1, int n, double r) {
  if (n < 2) throw InvalidArgument("hypersurface factor requires n >= 2");
  if (!(lambda1 > 0.0)) throw InvalidArgument("lambda1 must be positive");
  const double c = lambda1 * (n - 1) / (12.0 * n * (n + 2));
  return detail::invert_or_throw(1.0 - r * r * c, r, "hypersurface aggregate factor");
}

enum class ScalingKind { Flat, LocalScalar, SurfaceExact, SurfaceHeuristic, Hypersurface };

/// A curvature correction together with the parameters it was built from.
struct ScalingFactor {
  ScalingKind kind = ScalingKind::Flat;
  int dimension = 2;
  double scalar_curvature = 0.0;
  int chi = 0;
  double area = 0.0;
  double lambda1 = 0.0;

  static ScalingFactor flat(int n) { return {ScalingKind::Flat, n}; }
  static ScalingFactor local(double sc, int n) {
    ScalingFactor f{ScalingKind::LocalScalar, n};
    f.scalar_curvature = sc;
    return f;
  }
  static ScalingFactor surface(int chi, std::optional<double> area = {}) {
    ScalingFactor f{area ? ScalingKind::SurfaceExact : ScalingKind::SurfaceHeuristic, 2};
    f.chi = chi;
    f.area = area.value_or(0.0);
    return f;
  }
  static ScalingFactor hypersurface(double lambda1, int n) {
    ScalingFactor f{ScalingKind::Hypersurface, n};
    f.lambda1 = lambda1;
    return f;
  }

  /// Factor at radius r. Throws SingularScaling outside the admissible range.
  double operator()(double r) const {
    switch (kind) {
      case ScalingKind::Flat:
        return 1.0;
      case ScalingKind::LocalScalar:
        return local_curvature_factor(scalar_curvature, dimension, r);
      case ScalingKind::SurfaceExact:
        return surface_aggregate_factor(chi, r, area);
      case ScalingKind::SurfaceHeuristic:
        return surface_aggregate_factor(chi, r);
      case ScalingKind::Hypersurface:
        return hypersurface_aggregate_factor(lambda1, dimension, r);
    }
    return 1.0;
  }

  bool admissible_on(const RadiusGrid& grid) const {
    try {
      for (double r : grid.radii()) (void)(*this)(r);
    } catch (const SingularScaling&) {
      return false;
    }
    return true;
  }

  std::string describe() const {
    switch (kind) {
      case ScalingKind::Flat:
        return "flat";
      case ScalingKind::LocalScalar:
        return "local_scalar(sc=" + std::to_string(scalar_curvature) + ")";
      case ScalingKind::SurfaceExact:
        return "surface_exact(chi=" + std::to_string(chi) + ",area=" + std::to_string(area) + ")";
      case ScalingKind::SurfaceHeuristic:
        return "surface_heuristic(chi=" + std::to_string(chi) + ")";
      case ScalingKind::Hypersurface:
        return "hypersurface(lambda1=" + std::to_string(lambda1) +
               ",n=" + std::to_string(dimension) + ")";
    }
    return "unknown";
  }
};

struct Lambda1Candidate {
  std::string name;
  double value = 0.0;
  bool requires_volume = false;
};

/// Saturated upper bounds on the first Laplacian eigenvalue for the manifold
/// families with known bounds. Entries that do not apply to n (or need a
/// volume that was not given) are left out.
inline std::vector<Lambda1Candidate> lambda1_catalog(int n, std::optional<double> volume = {}) {
  if (n < 2) throw InvalidArgument("lambda1 catalog requires n >= 2");
  const double nd = n;
  std::vector<Lambda1Candidate> out;
  out.push_back({"hypersphere_submanifold", nd, false});
  out.push_back({"real_projective", 2.0 * (nd + 1.0), false});
  if (n % 2 == 0) out.push_back({"complex_projective", 2.0 * (nd + 2.0), false});
  if (n % 4 == 0) out.push_back({"quaternionic_projective", 2.0 * (nd + 4.0), false});
  out.push_back({"cayley_plane", 4.0 * nd, false});
  if (volume && n == 2) {
    if (!(*volume > 0.0)) throw InvalidArgument("volume must be positive");
    const double pi = std::numbers::pi;
    out.push_back({"clifford_torus", 4.0 * pi * pi / *volume, true});
    out.push_back({"veronese_surface", 12.0 * pi / *volume, true});
  }
  for (int a = 1; a <= n / 2; ++a) {
    out.push_back({"cr_complex_a" + std::to_string(a), 2.0 * (nd * nd + nd + 2.0 * a) / nd, false});
    out.push_back(
        {"cr_quaternionic_a" + std::to_string(a), 2.0 * (nd * nd + nd + 12.0 * a) / nd, false});
  }
  return out;
}

}  // namespace mdf
