#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <mdf/geometry.hpp>
#include <mdf/sampler.hpp>

using namespace mdf;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;

bool bit_identical(const PointSample& a, const PointSample& b) {
  return a.size() == b.size() && a.dimension() == b.dimension() &&
         std::equal(a.coords().begin(), a.coords().end(), b.coords().begin());
}

// Mass of {u < u_split} under the area element, midpoint rule.
double klein_mass_below(double u_split, int n = 600) {
  const double hu = u_split / n;
  const double hv = two_pi / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s += KleinBottle::jacobian((i + 0.5) * hu, (j + 0.5) * hv);
  }
  return s * hu * hv;
}
}  // namespace

TEST(FlatTorus, WrapDistance) {
  const std::vector<double> a{0.1, 0.5};
  const std::vector<double> b{0.9, 0.5};
  EXPECT_NEAR(torus_distance(a, b), 0.2, 1e-15);
  EXPECT_EQ(torus_distance(a, a), 0.0);
  const std::vector<double> c{0.95, 0.02};
  const std::vector<double> d{0.05, 0.98};
  EXPECT_NEAR(torus_distance(c, d), std::hypot(0.1, 0.04), 1e-15);
}

TEST(FlatTorus, DistanceIsAMetric) {
  SplitMix64 rng(1);
  for (int t = 0; t < 2000; ++t) {
    const std::vector<double> a{uniform01(rng), uniform01(rng)};
    const std::vector<double> b{uniform01(rng), uniform01(rng)};
    const std::vector<double> c{uniform01(rng), uniform01(rng)};
    EXPECT_EQ(torus_distance(a, b), torus_distance(b, a));
    EXPECT_LE(torus_distance(a, c), torus_distance(a, b) + torus_distance(b, c) + 1e-15);
    EXPECT_LE(torus_distance(a, b), std::sqrt(0.5) + 1e-15);
  }
}

TEST(FlatTorus, VariantsLieWhereExpected) {
  for (auto v : {Variant::Uniform, Variant::Cross, Variant::CrossWithNoise}) {
    const auto s = sample_flat_torus({Family::FlatTorus, v, 500, 3});
    for (double x : s.points.coords()) {
      EXPECT_GE(x, 0.0);
      EXPECT_LT(x, 1.0);
    }
    EXPECT_EQ(s.distances.size(), 500u);
  }
  const auto cross = sample_flat_torus({Family::FlatTorus, Variant::Cross, 500, 3});
  for (std::size_t i = 0; i < 500; ++i) {
    EXPECT_TRUE(cross.points(i, 0) == 0.5 || cross.points(i, 1) == 0.5);
  }
  const auto noisy = sample_flat_torus({Family::FlatTorus, Variant::CrossWithNoise, 500, 3, 3, 0.2});
  for (std::size_t i = 100; i < 500; ++i) {
    EXPECT_TRUE(noisy.points(i, 0) == 0.5 || noisy.points(i, 1) == 0.5);
  }
  EXPECT_THROW(sample_flat_torus({Family::FlatTorus, Variant::SineDensity, 5, 0}), InvalidArgument);
  EXPECT_THROW(sample_flat_torus({Family::Sphere, Variant::Uniform, 5, 0}), InvalidArgument);
  EXPECT_THROW(sample_flat_torus({Family::FlatTorus, Variant::CrossWithNoise, 5, 0, 3, 1.5}),
               InvalidArgument);
}

TEST(Sphere, PointsAreUnitVectors) {
  for (std::size_t d : {3u, 6u, 8u, 10u}) {
    for (auto v : {Variant::Uniform, Variant::Cross}) {
      const auto pts = sample_sphere({Family::Hypersphere, v, 300, 9, d});
      for (std::size_t i = 0; i < pts.size(); ++i) {
        double n2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) n2 += pts(i, k) * pts(i, k);
        EXPECT_NEAR(std::sqrt(n2), 1.0, 1e-12);
      }
    }
  }
  EXPECT_THROW(sample_sphere({Family::Sphere, Variant::Uniform, 5, 0, 2}), InvalidArgument);
}

TEST(Sphere, CrossInThreeDimensionsIsTwoGreatCircles) {
  const auto pts = sample_sphere({Family::Sphere, Variant::Cross, 400, 2, 3});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_TRUE(pts(i, 2) == 0.0 || pts(i, 0) == 0.0);
  }
}

TEST(Sphere, CrossUsesOppositeCoordinateBlocks) {
  const auto pts = sample_sphere({Family::Hypersphere, Variant::Cross, 10, 2, 8});
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t k = 4; k < 8; ++k) EXPECT_EQ(pts(i, k), 0.0);
  }
  for (std::size_t i = 5; i < 10; ++i) {
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(pts(i, k), 0.0);
  }
}

TEST(Sphere, UniformMeanIsNearZero) {
  const std::size_t m = 10000;
  const auto pts = sample_sphere({Family::Sphere, Variant::Uniform, m, 12, 3});
  for (std::size_t k = 0; k < 3; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += pts(i, k);
    EXPECT_LT(std::abs(mean / m), 4.0 / std::sqrt(static_cast<double>(m)));
  }
}

TEST(Sphere, GreatCircleDistance) {
  const std::vector<double> a{1, 0, 0};
  const std::vector<double> b{0, 1, 0};
  const std::vector<double> c{-1, 0, 0};
  EXPECT_NEAR(great_circle_distance(a, b), pi / 2, 1e-15);
  EXPECT_NEAR(great_circle_distance(a, c), pi, 1e-15);
}

TEST(Klein, MapAndJacobian) {
  // Jacobian from dual numbers against central differences.
  for (double u : {0.3, 1.7, 3.5, 5.2}) {
    for (double v : {0.1, 2.0, 4.4}) {
      const double h = 1e-6;
      const auto p1 = KleinBottle::point(u + h, v);
      const auto p0 = KleinBottle::point(u - h, v);
      const auto du = KleinBottle::d_du(u, v);
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(du[k], (p1[k] - p0[k]) / (2 * h), 1e-6);
      const auto q1 = KleinBottle::point(u, v + h);
      const auto q0 = KleinBottle::point(u, v - h);
      const auto dv = KleinBottle::d_dv(u, v);
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(dv[k], (q1[k] - q0[k]) / (2 * h), 1e-6);
      EXPECT_GT(KleinBottle::jacobian(u, v), 0.0);
    }
  }
  // The two pieces meet at u = pi; u = 2 pi closes up onto u = 0 with the
  // orientation-reversing flip v -> pi - v.
  for (double v : {0.0, 1.0, 3.0}) {
    const auto a = KleinBottle::point(pi - 1e-9, v);
    const auto b = KleinBottle::point(pi, v);
    const auto c = KleinBottle::point(two_pi - 1e-9, pi - v);
    const auto d = KleinBottle::point(0.0, v);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(a[k], b[k], 1e-6);
      EXPECT_NEAR(c[k], d[k], 1e-6);
    }
  }
}

TEST(Klein, AreaQuadratureIsConverged) {
  const double coarse = klein_mass_below(two_pi, 500);
  EXPECT_NEAR(KleinBottle::area() / coarse, 1.0, 1e-4);
  EXPECT_GT(KleinBottle::envelope(), 0.0);
}

TEST(Klein, RejectionAcceptanceRate) {
  const std::size_t m = 10000;
  const auto params = sample_klein_parameters({Family::KleinBottle, Variant::Uniform, m, 21});
  const double p = KleinBottle::area() / (two_pi * two_pi * KleinBottle::envelope());
  const double expected = m / p;
  // Number of proposals for m acceptances is negative binomial.
  const double sd = std::sqrt(m * (1 - p)) / p;
  EXPECT_NEAR(static_cast<double>(params.trials), expected, 4 * sd);
  EXPECT_LE(static_cast<double>(params.trials) / m, 1.0 / p + 4 * sd / m);
}

TEST(Klein, EqualMassRegionsGetEqualCounts) {
  // Bisect for the u split with half the total mass.
  const double total = klein_mass_below(two_pi, 400);
  double lo = 0.0;
  double hi = two_pi;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (klein_mass_below(mid, 400) < 0.5 * total ? lo : hi) = mid;
  }
  const double split = 0.5 * (lo + hi);
  const std::size_t m = 20000;
  const auto params = sample_klein_parameters({Family::KleinBottle, Variant::Uniform, m, 5});
  std::size_t below = 0;
  for (const auto& uv : params.uv) below += uv[0] < split ? 1 : 0;
  const double sigma = std::sqrt(m * 0.25);
  EXPECT_LT(std::abs(static_cast<double>(below) - m / 2.0), 3 * sigma);
}

TEST(Klein, CrossParametersLieOnTheCurves) {
  const auto params = sample_klein_parameters({Family::KleinBottle, Variant::Cross, 2000, 8});
  std::size_t first = 0;
  for (const auto& uv : params.uv) {
    EXPECT_TRUE(uv[0] == pi || uv[1] == pi);
    first += uv[0] == pi ? 1 : 0;
  }
  const auto len = KleinBottle::cross_lengths();
  const double p = len[0] / (len[0] + len[1]);
  EXPECT_NEAR(static_cast<double>(first) / 2000, p, 4 * std::sqrt(p * (1 - p) / 2000));
}

TEST(Klein, SineVariantFavoursPositiveSinU) {
  const auto params = sample_klein_parameters({Family::KleinBottle, Variant::SineDensity, 4000, 8});
  std::size_t upper = 0;
  for (const auto& uv : params.uv) upper += uv[0] < pi ? 1 : 0;
  EXPECT_GT(upper, 2600u);
}

TEST(Klein, RejectsUnsupportedVariants) {
  EXPECT_THROW(sample_klein_bottle({Family::KleinBottle, Variant::CrossWithNoise, 10, 0}),
               InvalidArgument);
  EXPECT_THROW(sample_klein_bottle({Family::Sphere, Variant::Uniform, 10, 0}), InvalidArgument);
}

TEST(Lift, AppendsUniformCoordinates) {
  const auto base = sample_klein_bottle({Family::KleinBottle, Variant::Uniform, 10000, 4});
  const auto lifted = lift_to_dimension(base, 10, 77);
  ASSERT_EQ(lifted.dimension(), 10u);
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(lifted(i, k), base(i, k));
  }
  // Kolmogorov-Smirnov against U[0, 2 pi] at alpha = 0.01 per appended axis.
  const double crit = 1.628 / std::sqrt(static_cast<double>(base.size()));
  for (std::size_t k = 3; k < 10; ++k) {
    std::vector<double> x(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) x[i] = lifted(i, k);
    std::sort(x.begin(), x.end());
    double dmax = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double f = x[i] / two_pi;
      dmax = std::max({dmax, (i + 1) / n - f, f - i / n});
    }
    EXPECT_LT(dmax, crit) << "axis " << k;
  }
  EXPECT_THROW(lift_to_dimension(base, 3, 1), InvalidArgument);
}

TEST(Samplers, DeterministicForAFixedSamplerSpec) {
  const SamplerSpec specs[] = {
      {Family::FlatTorus, Variant::CrossWithNoise, 300, 5},
      {Family::Sphere, Variant::Uniform, 300, 5, 3},
      {Family::Hypersphere, Variant::Cross, 300, 5, 6},
      {Family::KleinBottle, Variant::SineDensity, 300, 5},
      {Family::KleinBottle, Variant::Cross, 300, 5},
  };
  for (const auto& s : specs) {
    EXPECT_TRUE(bit_identical(sample_points(s), sample_points(s))) << s.name();
    auto other = s;
    other.seed = 6;
    EXPECT_FALSE(bit_identical(sample_points(s), sample_points(other))) << s.name();
  }
}

TEST(Samplers, VolumesAndDimensions) {
  EXPECT_EQ(analytic_volume(Family::FlatTorus), 1.0);
  EXPECT_NEAR(analytic_volume(Family::Sphere, 3), 4 * pi, 1e-12);
  EXPECT_NEAR(analytic_volume(Family::Hypersphere, 6), unit_sphere_volume(5), 1e-12);
  EXPECT_EQ(intrinsic_dimension(Family::Hypersphere, 10), 9);
  EXPECT_EQ(intrinsic_dimension(Family::KleinBottle), 2);
  EXPECT_EQ(parse_family("klein_bottle"), Family::KleinBottle);
  EXPECT_EQ(parse_variant("cross_noise"), Variant::CrossWithNoise);
  EXPECT_THROW(parse_variant("bogus"), InvalidArgument);
}
