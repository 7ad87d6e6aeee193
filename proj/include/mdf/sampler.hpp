#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "core.hpp"
#include "geometry.hpp"
#include "random.hpp"

namespace mdf {

enum class Family { FlatTorus, Sphere, KleinBottle, Hypersphere };
enum class Variant { Uniform, Cross, CrossWithNoise, SineDensity };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::FlatTorus: return "flat_torus";
    case Family::Sphere: return "sphere";
    case Family::KleinBottle: return "klein_bottle";
    case Family::Hypersphere: return "hypersphere";
  }
  return "unknown";
}

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::Uniform: return "uniform";
    case Variant::Cross: return "cross";
    case Variant::CrossWithNoise: return "cross_noise";
    case Variant::SineDensity: return "sine";
  }
  return "unknown";
}

inline Family parse_family(const std::string& s) {
  if (s == "flat_torus") return Family::FlatTorus;
  if (s == "sphere") return Family::Sphere;
  if (s == "klein_bottle") return Family::KleinBottle;
  if (s == "hypersphere") return Family::Hypersphere;
  throw InvalidArgument("unknown sample family '" + s + "'");
}

inline Variant parse_variant(const std::string& s) {
  if (s == "uniform") return Variant::Uniform;
  if (s == "cross") return Variant::Cross;
  if (s == "cross_noise") return Variant::CrossWithNoise;
  if (s == "sine") return Variant::SineDensity;
  throw InvalidArgument("unknown sample variant '" + s + "'");
}

struct SamplerSpec {
  Family family = Family::FlatTorus;
  Variant variant = Variant::Uniform;
  std::size_t m = 100;
  std::uint64_t seed = 0;
  /// Ambient dimension for sphere families (the sphere is S^(d-1)).
  std::size_t ambient_dimension = 3;
  /// Fraction of uniform points mixed into CrossWithNoise, in (0, 1).
  double noise_fraction = 0.1;

  void validate() const {
    if (m < 1) throw InvalidArgument("sample size must be >= 1");
    if (variant == Variant::CrossWithNoise && !(noise_fraction > 0.0 && noise_fraction < 1.0)) {
      throw InvalidArgument("noise fraction must lie in (0, 1)");
    }
    if (variant == Variant::SineDensity && family != Family::KleinBottle) {
      throw InvalidArgument("the sine density variant is defined for the Klein bottle only");
    }
    if ((family == Family::Sphere || family == Family::Hypersphere) && ambient_dimension < 3) {
      throw InvalidArgument("sphere samplers need ambient dimension >= 3");
    }
  }

  std::string name() const {
    std::string n = to_string(family) + "/" + to_string(variant);
    if (family == Family::Sphere || family == Family::Hypersphere) {
      n += "/d" + std::to_string(ambient_dimension);
    }
    return n;
  }
};

// ---------------------------------------------------------------------------
// Flat torus [0,1)^2
// ---------------------------------------------------------------------------

/// Geodesic distance on the unit flat torus: per-axis wrap, then Euclidean.
inline double torus_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(a[k] - b[k]);
    const double w = std::min(d, 1.0 - d);
    s += w * w;
  }
  return std::sqrt(s);
}

inline DistanceMatrix torus_distance_matrix(const PointSample& pts) {
  const std::size_t m = pts.size();
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = torus_distance(pts.point(i), pts.point(j));
      d[i * m + j] = v;
      d[j * m + i] = v;
    }
  }
  return validate_distance_matrix(d, m, m, false);
}

struct FlatTorusSample {
  PointSample points;
  DistanceMatrix distances;
};

/// Uniform: iid on the square. Cross: uniform on {x = 1/2} u {y = 1/2}.
/// CrossWithNoise: round(f m) uniform points followed by cross points.
inline FlatTorusSample sample_flat_torus(const SamplerSpec& spec) {
  spec.validate();
  if (spec.family != Family::FlatTorus) throw InvalidArgument("sample_flat_torus: wrong family");
  SplitMix64 rng(spec.seed);
  std::vector<double> c;
  c.reserve(spec.m * 2);
  auto push_uniform = [&] {
    c.push_back(uniform01(rng));
    c.push_back(uniform01(rng));
  };
  auto push_cross = [&] {
    const bool vertical = uniform01(rng) < 0.5;
    const double t = uniform01(rng);
    if (vertical) {
      c.push_back(0.5);
      c.push_back(t);
    } else {
      c.push_back(t);
      c.push_back(0.5);
    }
  };
  switch (spec.variant) {
    case Variant::Uniform:
      for (std::size_t i = 0; i < spec.m; ++i) push_uniform();
      break;
    case Variant::Cross:
      for (std::size_t i = 0; i < spec.m; ++i) push_cross();
      break;
    case Variant::CrossWithNoise: {
      const auto noisy = static_cast<std::size_t>(std::llround(spec.noise_fraction * spec.m));
      for (std::size_t i = 0; i < noisy; ++i) push_uniform();
      for (std::size_t i = noisy; i < spec.m; ++i) push_cross();
      break;
    }
    case Variant::SineDensity:
      throw InvalidArgument("sine density is not defined on the flat torus");
  }
  PointSample pts(spec.m, 2, std::move(c), spec.seed, spec.name());
  auto d = torus_distance_matrix(pts);
  return {std::move(pts), std::move(d)};
}

// ---------------------------------------------------------------------------
// Spheres S^(d-1) in R^d
// ---------------------------------------------------------------------------

/// Great-circle distance between unit vectors, 2 asin(|a-b|/2).
inline double great_circle_distance(std::span<const double> a, std::span<const double> b) {
  const double chord = euclidean_distance(a, b);
  return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
}

inline DistanceMatrix great_circle_distance_matrix(const PointSample& pts) {
  const std::size_t m = pts.size();
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = great_circle_distance(pts.point(i), pts.point(j));
      d[i * m + j] = v;
      d[j * m + i] = v;
    }
  }
  return validate_distance_matrix(d, m, m, false);
}

/// Uniform: normalized Gaussian vectors. Cross: the first ceil(m/2) points
/// uniform on the unit sphere of the first ceil(d/2) coordinates, the rest on
/// the sphere of the last ceil(d/2) coordinates.
inline PointSample sample_sphere(const SamplerSpec& spec) {
  spec.validate();
  if (spec.family != Family::Sphere && spec.family != Family::Hypersphere) {
    throw InvalidArgument("sample_sphere: wrong family");
  }
  if (spec.variant != Variant::Uniform && spec.variant != Variant::Cross) {
    throw InvalidArgument("sphere samplers support the uniform and cross variants");
  }
  const std::size_t d = spec.ambient_dimension;
  const std::size_t block = (d + 1) / 2;
  SplitMix64 rng(spec.seed);
  std::vector<double> c(spec.m * d, 0.0);
  std::vector<double> g(d);
  for (std::size_t i = 0; i < spec.m; ++i) {
    std::size_t offset = 0;
    std::size_t len = d;
    if (spec.variant == Variant::Cross) {
      len = block;
      offset = (i < (spec.m + 1) / 2) ? 0 : d - block;
    }
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        g[k] = standard_normal(rng);
        norm2 += g[k] * g[k];
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t k = 0; k < len; ++k) c[i * d + offset + k] = g[k] * inv;
  }
  return PointSample(spec.m, d, std::move(c), spec.seed, spec.name());
}

// ---------------------------------------------------------------------------
// Klein bottle
// ---------------------------------------------------------------------------

namespace detail {

/// Forward-mode dual number; enough arithmetic for the bottle map.
struct Dual {
  double v = 0.0;
  double d = 0.0;
};
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }
inline Dual operator+(double s, Dual a) { return {s + a.v, a.d}; }
inline Dual sin(Dual a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual cos(Dual a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
inline double value(Dual a) { return a.v; }
inline double value(double a) { return a; }

}  // namespace detail

/// The classical "bottle" immersion of the Klein bottle in R^3, for
/// (u, v) in [0, 2 pi)^2 with tube radius r(u) = 4 (1 - cos(u)/2):
///
///   u <  pi: x = 6 cos u (1 + sin u) + r cos u cos v
///            y = 16 sin u + r sin u cos v
///   u >= pi: x = 6 cos u (1 + sin u) + r cos(v + pi)
///            y = 16 sin u
///   z = r sin v
///
/// The area element is |d sigma/du x d sigma/dv|, evaluated with exact
/// forward-mode derivatives.
class KleinBottle {
 public:
  template <typename T>
  static std::array<T, 3> map(T u, T v) {
    using std::cos;
    using std::sin;
    using detail::cos;
    using detail::sin;
    const T r = 4.0 * (1.0 + (-0.5) * cos(u));
    const T x0 = 6.0 * (cos(u) * (1.0 + sin(u)));
    if (detail::value(u) < std::numbers::pi) {
      return {x0 + r * cos(u) * cos(v), 16.0 * sin(u) + r * sin(u) * cos(v), r * sin(v)};
    }
    return {x0 + r * cos(v + T{std::numbers::pi}), 16.0 * sin(u), r * sin(v)};
  }

  static std::array<double, 3> point(double u, double v) { return map(u, v); }

  static std::array<double, 3> d_du(double u, double v) {
    const auto p = map(detail::Dual{u, 1.0}, detail::Dual{v, 0.0});
    return {p[0].d, p[1].d, p[2].d};
  }

  static std::array<double, 3> d_dv(double u, double v) {
    const auto p = map(detail::Dual{u, 0.0}, detail::Dual{v, 1.0});
    return {p[0].d, p[1].d, p[2].d};
  }

  /// Area element |sigma_u x sigma_v|.
  static double jacobian(double u, double v) {
    const auto a = d_du(u, v);
    const auto b = d_dv(u, v);
    const double cx = a[1] * b[2] - a[2] * b[1];
    const double cy = a[2] * b[0] - a[0] * b[2];
    const double cz = a[0] * b[1] - a[1] * b[0];
    return std::sqrt(cx * cx + cy * cy + cz * cz);
  }

  static double speed_u(double u, double v) { return norm(d_du(u, v)); }
  static double speed_v(double u, double v) { return norm(d_dv(u, v)); }

  /// Surface area by the midpoint rule on a 1000 x 1000 parameter grid.
  static double area() {
    static const double cached = [] {
      constexpr int n = 1000;
      const double h = 2.0 * std::numbers::pi / n;
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += jacobian((i + 0.5) * h, (j + 0.5) * h);
        sum += row;
      }
      return sum * h * h;
    }();
    return cached;
  }

  /// Rejection envelope for the area element: dense-grid maximum times 1.05.
  static double envelope() {
    static const double cached = [] {
      constexpr int n = 400;
      const double h = 2.0 * std::numbers::pi / n;
      double mx = 0.0;
      for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) mx = std::max(mx, jacobian(i * h, j * h));
      }
      return 1.05 * mx;
    }();
    return cached;
  }

  /// Lengths of the curves {u = pi} and {v = pi}.
  static std::array<double, 2> cross_lengths() {
    static const std::array<double, 2> cached = [] {
      constexpr int n = 20000;
      const double h = 2.0 * std::numbers::pi / n;
      double a = 0.0;
      double b = 0.0;
      for (int i = 0; i < n; ++i) {
        const double t = (i + 0.5) * h;
        a += speed_v(std::numbers::pi, t);
        b += speed_u(t, std::numbers::pi);
      }
      return std::array<double, 2>{a * h, b * h};
    }();
    return cached;
  }

  static std::array<double, 2> cross_speed_envelopes() {
    static const std::array<double, 2> cached = [] {
      constexpr int n = 4000;
      const double h = 2.0 * std::numbers::pi / n;
      double a = 0.0;
      double b = 0.0;
      for (int i = 0; i <= n; ++i) {
        a = std::max(a, speed_v(std::numbers::pi, i * h));
        b = std::max(b, speed_u(i * h, std::numbers::pi));
      }
      return std::array<double, 2>{1.05 * a, 1.05 * b};
    }();
    return cached;
  }

 private:
  static double norm(const std::array<double, 3>& a) {
    return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  }
};

struct KleinParameters {
  std::vector<std::array<double, 2>> uv;
  /// Proposals drawn by the rejection sampler (equals uv.size() when no
  /// rejection was needed).
  std::uint64_t trials = 0;
};

/// Draws bottle parameters. Uniform: rejection against the area element.
/// Cross: arc-length uniform on {u = pi} u {v = pi}. SineDensity: rejection
/// against area element times (1 + sin u)/2.
inline KleinParameters sample_klein_parameters(const SamplerSpec& spec) {
  spec.validate();
  if (spec.family != Family::KleinBottle) throw InvalidArgument("sample_klein_bottle: wrong family");
  if (spec.variant == Variant::CrossWithNoise) {
    throw InvalidArgument("the Klein bottle supports uniform, cross and sine variants");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  SplitMix64 rng(spec.seed);
  KleinParameters out;
  out.uv.reserve(spec.m);
  if (spec.variant == Variant::Cross) {
    const auto len = KleinBottle::cross_lengths();
    const auto env = KleinBottle::cross_speed_envelopes();
    const double p_first = len[0] / (len[0] + len[1]);
    while (out.uv.size() < spec.m) {
      const bool first = uniform01(rng) < p_first;
      for (;;) {
        ++out.trials;
        const double t = uniform(rng, 0.0, two_pi);
        const double speed = first ? KleinBottle::speed_v(std::numbers::pi, t)
                                   : KleinBottle::speed_u(t, std::numbers::pi);
        if (uniform01(rng) * env[first ? 0 : 1] < speed) {
          out.uv.push_back(first ? std::array<double, 2>{std::numbers::pi, t}
                                 : std::array<double, 2>{t, std::numbers::pi});
          break;
        }
      }
    }
    return out;
  }
  const double env = KleinBottle::envelope();
  const bool sine = spec.variant == Variant::SineDensity;
  while (out.uv.size() < spec.m) {
    ++out.trials;
    const double u = uniform(rng, 0.0, two_pi);
    const double v = uniform(rng, 0.0, two_pi);
    double density = KleinBottle::jacobian(u, v);
    if (sine) density *= 0.5 * (1.0 + std::sin(u));
    if (uniform01(rng) * env < density) out.uv.push_back({u, v});
  }
  return out;
}

inline PointSample sample_klein_bottle(const SamplerSpec& spec) {
  const auto params = sample_klein_parameters(spec);
  std::vector<double> c;
  c.reserve(spec.m * 3);
  for (const auto& [u, v] : params.uv) {
    const auto p = KleinBottle::point(u, v);
    c.insert(c.end(), p.begin(), p.end());
  }
  return PointSample(spec.m, 3, std::move(c), spec.seed, spec.name());
}

/// Appends target_d - d coordinates drawn iid uniform on [0, 2 pi].
inline PointSample lift_to_dimension(const PointSample& points, std::size_t target_d,
                                     std::uint64_t seed) {
  const std::size_t d = points.dimension();
  if (target_d <= d) {
    throw InvalidArgument("lift target dimension must exceed the current dimension");
  }
  SplitMix64 rng(seed);
  std::vector<double> c;
  c.reserve(points.size() * target_d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    c.insert(c.end(), p.begin(), p.end());
    for (std::size_t k = d; k < target_d; ++k) c.push_back(uniform(rng, 0.0, 2.0 * std::numbers::pi));
  }
  return PointSample(points.size(), target_d, std::move(c), seed,
                     points.sampler() + "+lift" + std::to_string(target_d));
}

/// Dispatches to the family's sampler (coordinates only).
inline PointSample sample_points(const SamplerSpec& spec) {
  switch (spec.family) {
    case Family::FlatTorus: return sample_flat_torus(spec).points;
    case Family::Sphere:
    case Family::Hypersphere: return sample_sphere(spec);
    case Family::KleinBottle: return sample_klein_bottle(spec);
  }
  throw InvalidArgument("unknown family");
}

/// Known volume of the sampled manifold: 1 for the torus, |S^(d-1)| for
/// spheres, the quadrature area for the Klein bottle.
inline double analytic_volume(Family family, std::size_t ambient_dimension = 3) {
  switch (family) {
    case Family::FlatTorus: return 1.0;
    case Family::Sphere:
    case Family::Hypersphere: return unit_sphere_volume(static_cast<int>(ambient_dimension) - 1);
    case Family::KleinBottle: return KleinBottle::area();
  }
  throw InvalidArgument("unknown family");
}

/// Intrinsic dimension of the sampled manifold.
inline int intrinsic_dimension(Family family, std::size_t ambient_dimension = 3) {
  switch (family) {
    case Family::FlatTorus:
    case Family::KleinBottle: return 2;
    case Family::Sphere:
    case Family::Hypersphere: return static_cast<int>(ambient_dimension) - 1;
  }
  throw InvalidArgument("unknown family");
}

}  // namespace mdf
