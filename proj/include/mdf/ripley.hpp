#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "core.hpp"

namespace mdf {

/// Axis-aligned box [lower, upper].
class RectDomain {
 public:
  RectDomain(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size()) {
      throw InvalidArgument("domain bounds must be nonempty and of equal dimension");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (!(lower_[i] < upper_[i])) throw InvalidArgument("domain needs lower < upper per axis");
    }
  }

  std::size_t dimension() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }

  double volume() const noexcept {
    double v = 1.0;
    for (std::size_t i = 0; i < lower_.size(); ++i) v *= upper_[i] - lower_[i];
    return v;
  }

  bool contains(std::span<const double> x) const noexcept {
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
    }
    return true;
  }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Inner region where radius-R balls stay inside the domain.
inline RectDomain erode_domain(const RectDomain& dom, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("erosion radius must be positive");
  std::vector<double> lo = dom.lower();
  std::vector<double> hi = dom.upper();
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(hi[i] - lo[i] > 2.0 * radius)) {
      throw EmptyErosion("eroding by " + std::to_string(radius) + " empties axis " +
                         std::to_string(i));
    }
    lo[i] += radius;
    hi[i] -= radius;
  }
  return RectDomain(std::move(lo), std::move(hi));
}

/// Raw: intensity-scaled counts (expected pi r^2 in the plane).
/// Proportion: raw divided by vol(domain).
enum class RipleyNormalization { Raw, Proportion };

namespace detail {

inline void check_ripley_inputs(const PointSample& points, const RectDomain& dom) {
  if (points.dimension() != dom.dimension()) {
    throw InvalidArgument("point and domain dimensions differ");
  }
}

/// sum_{x != p} inv_weight(x) * I(|x - p| < r_i), accumulated in index order.
template <typename InvWeight>
std::vector<double> weighted_neighbor_sums(const PointSample& points, std::size_t p,
                                           const RadiusGrid& grid, InvWeight&& inv_weight) {
  std::vector<double> sums(grid.size(), 0.0);
  const auto center = points.point(p);
  for (std::size_t x = 0; x < points.size(); ++x) {
    if (x == p) continue;
    const double d = euclidean_distance(center, points.point(x));
    const double w = inv_weight(x);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (d < grid[i]) sums[i] += w;
    }
  }
  return sums;
}

inline void require_interior(const PointSample& points, std::size_t p, const RadiusGrid& grid,
                             const RectDomain& dom) {
  if (p >= points.size()) throw InvalidArgument("point index out of range");
  const RectDomain inner = erode_domain(dom, grid.r_max());
  if (!inner.contains(points.point(p))) {
    throw BoundaryError("point " + std::to_string(p) + " lies outside the eroded domain");
  }
}

}  // namespace detail

/// Empirical local K-function lambda^-1 sum_{x != p} I(|x - p| < r), with
/// lambda = m / vol(dom).
inline DensityFunction ripley_local(const PointSample& points, std::size_t p,
                                    const RadiusGrid& grid, const RectDomain& dom,
                                    RipleyNormalization norm = RipleyNormalization::Raw) {
  detail::check_ripley_inputs(points, dom);
  detail::require_interior(points, p, grid, dom);
  const double lambda_hat = static_cast<double>(points.size()) / dom.volume();
  const double inv = 1.0 / lambda_hat;
  auto v = detail::weighted_neighbor_sums(points, p, grid, [inv](std::size_t) { return inv; });
  if (norm == RipleyNormalization::Proportion) {
    for (double& x : v) x /= dom.volume();
  }
  return DensityFunction(grid, std::move(v));
}

/// Mean of the local K-functions over the points inside the eroded domain.
inline DensityFunction ripley_aggregated(const PointSample& points, const RadiusGrid& grid,
                                         const RectDomain& dom,
                                         RipleyNormalization norm = RipleyNormalization::Raw) {
  detail::check_ripley_inputs(points, dom);
  const RectDomain inner = erode_domain(dom, grid.r_max());
  std::vector<double> sum(grid.size(), 0.0);
  std::size_t interior = 0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (!inner.contains(points.point(p))) continue;
    const auto local = ripley_local(points, p, grid, dom, norm);
    for (std::size_t i = 0; i < grid.size(); ++i) sum[i] += local[i];
    ++interior;
  }
  if (interior == 0) throw BoundaryError("no points inside the eroded domain");
  for (double& s : sum) s /= static_cast<double>(interior);
  return DensityFunction(grid, std::move(sum));
}

/// Inhomogeneous local K-function sum_{x != p} weights[x]^-1 I(|x - p| < r),
/// where weights are the estimated intensities at each point.
inline DensityFunction ripley_inhomogeneous(const PointSample& points,
                                            std::span<const double> weights, std::size_t p,
                                            const RadiusGrid& grid, const RectDomain& dom) {
  detail::check_ripley_inputs(points, dom);
  if (weights.size() != points.size()) throw InvalidArgument("need one weight per point");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("weights must be positive");
  }
  detail::require_interior(points, p, grid, dom);
  auto v = detail::weighted_neighbor_sums(points, p, grid,
                                          [&](std::size_t x) { return 1.0 / weights[x]; });
  return DensityFunction(grid, std::move(v));
}

}  // namespace mdf
