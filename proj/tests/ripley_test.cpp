#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <mdf/estimator.hpp>
#include <mdf/random.hpp>
#include <mdf/ripley.hpp>

using namespace mdf;

namespace {

PointSample uniform_square(std::size_t m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> c(m * 2);
  for (double& x : c) x = uniform01(rng);
  return PointSample(m, 2, c);
}

const RectDomain unit_square({0.0, 0.0}, {1.0, 1.0});

}  // namespace

TEST(Erosion, Examples) {
  const auto e = erode_domain(unit_square, 0.1);
  EXPECT_DOUBLE_EQ(e.lower()[0], 0.1);
  EXPECT_DOUBLE_EQ(e.upper()[1], 0.9);
  EXPECT_THROW(erode_domain(unit_square, 0.5), EmptyErosion);
  const auto r = erode_domain(RectDomain({0, 0}, {2, 1}), 0.25);
  EXPECT_EQ(r.lower(), (std::vector<double>{0.25, 0.25}));
  EXPECT_EQ(r.upper(), (std::vector<double>{1.75, 0.75}));
  EXPECT_THROW(RectDomain({0, 0}, {1}), InvalidArgument);
  EXPECT_THROW(RectDomain({0, 1}, {1, 1}), InvalidArgument);
}

TEST(RipleyLocal, PairCounts) {
  // Two points at distance 1 with lambda = 2: the weighted sum before any
  // boundary handling is 0 below r = 1 and 1/2 above.
  const PointSample pair(2, 2, {0.0, 0.0, 1.0, 0.0});
  const auto grid = RadiusGrid::from_radii({0.5, 1.5});
  const auto v = detail::weighted_neighbor_sums(pair, 0, grid, [](std::size_t) { return 0.5; });
  EXPECT_EQ(v[0], 0.0);
  EXPECT_EQ(v[1], 0.5);

  // The same pair well inside a window of area 1e2 (lambda = 2e-2).
  const RectDomain big({-5.0, -5.0}, {5.0, 5.0});
  const auto k = ripley_local(pair, 0, grid, big);
  EXPECT_EQ(k[0], 0.0);
  EXPECT_DOUBLE_EQ(k[1], 50.0);
  const auto kp = ripley_local(pair, 0, grid, big, RipleyNormalization::Proportion);
  EXPECT_DOUBLE_EQ(kp[1], 0.5);
}

TEST(RipleyLocal, BoundaryError) {
  const PointSample pts(2, 2, {0.05, 0.5, 0.5, 0.5});
  const auto grid = build_radius_grid(0.1, 4);
  EXPECT_THROW(ripley_local(pts, 0, grid, unit_square), BoundaryError);
  EXPECT_NO_THROW(ripley_local(pts, 1, grid, unit_square));
  EXPECT_THROW(ripley_local(pts, 5, grid, unit_square), InvalidArgument);
}

TEST(RipleyAggregated, CoincidentCluster) {
  const std::size_t m = 6;
  std::vector<double> c;
  for (std::size_t i = 0; i < m; ++i) {
    c.push_back(0.5);
    c.push_back(0.5);
  }
  const auto grid = build_radius_grid(0.2, 5);
  const auto k = ripley_aggregated(PointSample(m, 2, c), grid, unit_square);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_DOUBLE_EQ(k[i], (m - 1) / static_cast<double>(m));
}

TEST(RipleyAggregated, SingleInteriorPointEqualsLocal) {
  const PointSample pts(3, 2, {0.5, 0.5, 0.01, 0.5, 0.5, 0.99});
  const auto grid = build_radius_grid(0.3, 6);
  const auto agg = ripley_aggregated(pts, grid, unit_square);
  const auto loc = ripley_local(pts, 0, grid, unit_square);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(agg[i], loc[i]);
}

TEST(RipleyAggregated, NoInteriorPoints) {
  const PointSample pts(2, 2, {0.01, 0.01, 0.99, 0.99});
  EXPECT_THROW(ripley_aggregated(pts, build_radius_grid(0.2, 3), unit_square), BoundaryError);
}

TEST(RipleyAggregated, UniformExpectation) {
  double sum = 0.0;
  const auto grid = RadiusGrid::from_radii({0.05, 0.1});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    sum += ripley_aggregated(uniform_square(500, seed), grid, unit_square)[1];
  }
  EXPECT_NEAR(sum / 5.0, std::numbers::pi * 0.01, 0.15 * std::numbers::pi * 0.01);
}

TEST(RipleyInhomogeneous, ConstantWeightsReproduceHomogeneousExactly) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pts = uniform_square(300, seed);
    const auto grid = build_radius_grid(0.15, 30);
    const std::vector<double> w(pts.size(), static_cast<double>(pts.size()) / unit_square.volume());
    const auto inner = erode_domain(unit_square, grid.r_max());
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (!inner.contains(pts.point(p))) continue;
      const auto a = ripley_local(pts, p, grid, unit_square);
      const auto b = ripley_inhomogeneous(pts, w, p, grid, unit_square);
      for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(a[i], b[i]);
    }
  }
}

TEST(RipleyInhomogeneous, Examples) {
  const PointSample pts(3, 2, {0.5, 0.5, 0.55, 0.5, 0.9, 0.9});
  const auto grid = build_radius_grid(0.1, 2);
  const std::vector<double> w{1.0, 2.0, 4.0};
  EXPECT_DOUBLE_EQ(ripley_inhomogeneous(pts, w, 0, grid, unit_square)[1], 0.5);
  EXPECT_THROW(ripley_inhomogeneous(pts, std::vector<double>{1.0, 0.0, 1.0}, 0, grid, unit_square),
               InvalidArgument);
  EXPECT_THROW(ripley_inhomogeneous(pts, std::vector<double>{1.0, 1.0}, 0, grid, unit_square),
               InvalidArgument);
}

TEST(Ripley, DiffersFromMdfBySelfCount) {
  // All points interior to a window much larger than the sample spread.
  const RectDomain window({-10.0, -10.0}, {11.0, 11.0});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pts = uniform_square(25, seed);
    const auto grid = build_radius_grid(0.9, 20);
    const auto s = sort_rows(euclidean_distance_matrix(pts));
    const auto mdf = aggregated_mdf(s, grid, ManifoldModel(2, 1.0));
    const auto k = ripley_aggregated(pts, grid, window);
    const double vol = window.volume();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(mdf[i] * vol - k[i], vol / 25.0, 1e-10 * vol);
    }
  }
}
