#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "geometry.hpp"
#include "parallel.hpp"

namespace mdf {

/// Every row of a distance matrix sorted ascending; row i starts with the
/// self-distance 0. Ball counts become binary searches.
class SortedDistanceMatrix {
 public:
  std::size_t size() const noexcept { return m_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {rows_.data() + i * m_, m_};
  }

  friend SortedDistanceMatrix sort_rows(const DistanceMatrix&, std::size_t);

 private:
  SortedDistanceMatrix(std::size_t m, std::vector<double> rows) : m_(m), rows_(std::move(rows)) {}
  std::size_t m_;
  std::vector<double> rows_;
};

inline SortedDistanceMatrix sort_rows(const DistanceMatrix& d, std::size_t workers = 1) {
  const std::size_t m = d.size();
  std::vector<double> rows(d.entries().begin(), d.entries().end());
  parallel_for(m, workers, [&](std::size_t i) {
    std::sort(rows.begin() + static_cast<std::ptrdiff_t>(i * m),
              rows.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
  });
  return SortedDistanceMatrix(m, std::move(rows));
}

/// Number of points x with d(p, x) < r (open ball).
inline std::size_t ball_count(const SortedDistanceMatrix& s, std::size_t p, double r,
                              bool include_self = true) {
  if (p >= s.size()) {
    throw InvalidArgument("ball_count: index " + std::to_string(p) + " out of range");
  }
  if (!(r > 0.0)) throw InvalidArgument("ball_count: radius must be positive");
  const auto row = s.row(p);
  const auto n = static_cast<std::size_t>(std::lower_bound(row.begin(), row.end(), r) - row.begin());
  return include_self ? n : n - 1;
}

struct EstimatorOptions {
  bool include_self = true;
  std::size_t workers = 1;
};

/// The curvature correction a model prescribes around sample point p.
inline ScalingFactor scaling_for(const ManifoldModel& model, std::size_t p) {
  const int n = model.dimension();
  return std::visit(
      [&](const auto& c) -> ScalingFactor {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, curvature::Flat>) {
          return ScalingFactor::flat(n);
        } else if constexpr (std::is_same_v<T, curvature::PointwiseScalar>) {
          if (p >= c.values.size()) {
            throw MissingParameter("no scalar curvature supplied for point " + std::to_string(p));
          }
          return ScalingFactor::local(c.values[p], n);
        } else if constexpr (std::is_same_v<T, curvature::Surface>) {
          return ScalingFactor::surface(c.chi, c.area);
        } else {
          return ScalingFactor::hypersurface(c.lambda1, n);
        }
      },
      model.curvature());
}

/// Human-readable description of a model's scaling (per-point models are
/// summarized rather than listed).
inline std::string describe_scaling(const ManifoldModel& model) {
  if (std::holds_alternative<curvature::PointwiseScalar>(model.curvature())) {
    return "local_scalar(pointwise)";
  }
  return scaling_for(model, 0).describe();
}

/// Local estimator: factor(p, r_i) * #{x : d(p,x) < r_i} / m.
inline DensityFunction local_mdf(const SortedDistanceMatrix& s, std::size_t p,
                                 const RadiusGrid& grid, const ManifoldModel& model,
                                 const EstimatorOptions& opts = {}) {
  const ScalingFactor factor = scaling_for(model, p);
  const double m = static_cast<double>(s.size());
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double count = static_cast<double>(ball_count(s, p, grid[i], opts.include_self));
    values[i] = factor(grid[i]) * count / m;
  }
  return DensityFunction(grid, std::move(values));
}

/// Total ordered-pair ball counts sum_p #{x : d(p,x) < r_i} for every radius.
inline std::vector<std::uint64_t> aggregated_counts(const SortedDistanceMatrix& s,
                                                    const RadiusGrid& grid,
                                                    const EstimatorOptions& opts = {}) {
  std::vector<std::uint64_t> totals(grid.size(), 0);
  parallel_for(grid.size(), opts.workers, [&](std::size_t i) {
    std::uint64_t t = 0;
    for (std::size_t p = 0; p < s.size(); ++p) t += ball_count(s, p, grid[i], opts.include_self);
    totals[i] = t;
  });
  return totals;
}

/// Aggregated estimator (1/m^2) sum_p factor(p, r_i) sum_x I(d(p,x) < r_i).
///
/// Global factors (flat, surface, hypersurface) multiply the exact integer
/// pair count; pointwise factors are summed over p in index order, so the
/// result does not depend on the worker count.
inline DensityFunction aggregated_mdf(const SortedDistanceMatrix& s, const RadiusGrid& grid,
                                      const ManifoldModel& model,
                                      const EstimatorOptions& opts = {}) {
  const double m = static_cast<double>(s.size());
  const double m2 = m * m;
  std::vector<double> values(grid.size());
  if (const auto* pw = std::get_if<curvature::PointwiseScalar>(&model.curvature())) {
    if (pw->values.size() < s.size()) {
      throw MissingParameter("pointwise curvature needs one value per sample point");
    }
    parallel_for(grid.size(), opts.workers, [&](std::size_t i) {
      const double r = grid[i];
      double sum = 0.0;
      for (std::size_t p = 0; p < s.size(); ++p) {
        const double f = local_curvature_factor(pw->values[p], model.dimension(), r);
        sum += f * static_cast<double>(ball_count(s, p, r, opts.include_self));
      }
      values[i] = sum / m2;
    });
  } else {
    const ScalingFactor factor = scaling_for(model, 0);
    const auto totals = aggregated_counts(s, grid, opts);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      values[i] = factor(grid[i]) * static_cast<double>(totals[i]) / m2;
    }
  }
  return DensityFunction(grid, std::move(values));
}

/// Outcome of comparing an estimate with the theoretical MDF.
struct ScoreReport {
  double score = 0.0;
  /// m * ||K_theo - K_hat||, in expected-count units.
  double error_counts = 0.0;
  RadiusGrid grid;
  std::string scaling;
  std::size_t sample_size = 0;
  /// False when the estimate needed pointwise curvature from outside the data.
  bool intrinsic = true;

  bool degenerate() const noexcept { return score < 0.0; }
};

/// score = 1 - error_counts / m with error_counts = m * ||k_theo - k_hat||_2.
inline ScoreReport manifold_score(const DensityFunction& k_theo, const DensityFunction& k_hat,
                                  std::size_t m, std::string scaling = "unspecified") {
  if (m < 1) throw InvalidArgument("manifold_score: sample size must be positive");
  const double dist = l2_function_distance(k_theo, k_hat);
  const double md = static_cast<double>(m);
  const double error_counts = md * dist;
  return ScoreReport{1.0 - error_counts / md, error_counts, k_theo.grid(), std::move(scaling), m,
                     true};
}

/// Scores the aggregated estimate of `model` against its theoretical MDF.
inline ScoreReport score_aggregated(const SortedDistanceMatrix& s, const RadiusGrid& grid,
                                    const ManifoldModel& model,
                                    const EstimatorOptions& opts = {}) {
  auto report = manifold_score(theoretical_mdf(model, grid), aggregated_mdf(s, grid, model, opts),
                               s.size(), describe_scaling(model));
  report.intrinsic = !std::holds_alternative<curvature::PointwiseScalar>(model.curvature());
  return report;
}

/// Local manifold score at point p.
inline ScoreReport score_local(const SortedDistanceMatrix& s, std::size_t p,
                               const RadiusGrid& grid, const ManifoldModel& model,
                               const EstimatorOptions& opts = {}) {
  auto report = manifold_score(theoretical_mdf(model, grid), local_mdf(s, p, grid, model, opts),
                               s.size(), scaling_for(model, p).describe());
  report.intrinsic = !std::holds_alternative<curvature::PointwiseScalar>(model.curvature());
  return report;
}

// ---------------------------------------------------------------------------
// Parameter searches. All of them minimize the L2 error, i.e. maximize the score.
// ---------------------------------------------------------------------------

struct EulerSearchResult {
  int chi = 0;
  ScoreReport report;
  /// (chi, score) for every admissible candidate, in ascending chi.
  std::vector<std::pair<int, double>> candidates;
};

namespace detail {

inline DensityFunction scale_counts(const RadiusGrid& grid, const std::vector<std::uint64_t>& totals,
                                    double m, const ScalingFactor& factor) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = factor(grid[i]) * static_cast<double>(totals[i]) / (m * m);
  }
  return DensityFunction(grid, std::move(v));
}

}  // namespace detail

/// Picks the Euler characteristic in [chi_min, chi_max] whose heuristic
/// surface scaling best matches the flat theoretical MDF of a surface with
/// area `vol`. Ties go to smaller |chi|, then to larger chi.
inline EulerSearchResult search_euler_characteristic(const SortedDistanceMatrix& s,
                                                     const RadiusGrid& grid, double vol,
                                                     int chi_min, int chi_max,
                                                     const EstimatorOptions& opts = {}) {
  if (chi_min > chi_max) throw NoCandidate("empty Euler characteristic range");
  const auto theo = theoretical_mdf(ManifoldModel(2, vol), grid);
  const auto totals = aggregated_counts(s, grid, opts);
  const double m = static_cast<double>(s.size());
  std::optional<EulerSearchResult> best;
  std::vector<std::pair<int, double>> scored;
  for (int chi = chi_min; chi <= chi_max; ++chi) {
    const auto factor = ScalingFactor::surface(chi);
    if (!factor.admissible_on(grid)) continue;
    auto report = manifold_score(theo, detail::scale_counts(grid, totals, m, factor), s.size(),
                                 factor.describe());
    scored.emplace_back(chi, report.score);
    const bool better = !best || report.score > best->report.score ||
                        (report.score == best->report.score &&
                         (std::abs(chi) < std::abs(best->chi) ||
                          (std::abs(chi) == std::abs(best->chi) && chi > best->chi)));
    if (better) best = EulerSearchResult{chi, std::move(report), {}};
  }
  if (!best) throw NoCandidate("no admissible Euler characteristic on this grid");
  best->candidates = std::move(scored);
  return *best;
}

struct Lambda1SearchResult {
  Lambda1Candidate candidate;
  ScoreReport report;
  std::vector<std::pair<Lambda1Candidate, double>> candidates;
};

/// Picks the lambda1 candidate whose hypersurface scaling best matches the
/// theoretical MDF of an n-manifold of volume `vol`. Ties go to smaller lambda1.
inline Lambda1SearchResult search_lambda1(const SortedDistanceMatrix& s, const RadiusGrid& grid,
                                          double vol, int n,
                                          const std::vector<Lambda1Candidate>& candidates,
                                          const EstimatorOptions& opts = {}) {
  if (candidates.empty()) throw NoCandidate("no lambda1 candidates given");
  const auto theo = theoretical_mdf(ManifoldModel(n, vol), grid);
  const auto totals = aggregated_counts(s, grid, opts);
  const double m = static_cast<double>(s.size());
  std::optional<Lambda1SearchResult> best;
  std::vector<std::pair<Lambda1Candidate, double>> scored;
  for (const auto& c : candidates) {
    const auto factor = ScalingFactor::hypersurface(c.value, n);
    if (!factor.admissible_on(grid)) continue;
    auto report = manifold_score(theo, detail::scale_counts(grid, totals, m, factor), s.size(),
                                 factor.describe());
    scored.emplace_back(c, report.score);
    const bool better = !best || report.score > best->report.score ||
                        (report.score == best->report.score && c.value < best->candidate.value);
    if (better) best = Lambda1SearchResult{c, std::move(report), {}};
  }
  if (!best) throw NoCandidate("every lambda1 candidate is singular on this grid");
  best->candidates = std::move(scored);
  return *best;
}

struct DimensionSearchResult {
  int dimension = 0;
  ScoreReport report;
  std::vector<std::pair<int, double>> candidates;
};

/// Picks the intrinsic dimension in [d_min, d_max] maximizing the score with
/// `family` instantiated at each n. A surface descriptor contributes its
/// global factor regardless of n; hypersurface descriptors skip n = 1.
/// Ties go to smaller n.
inline DimensionSearchResult search_dimension(const SortedDistanceMatrix& s,
                                              const RadiusGrid& grid, double vol, int d_min,
                                              int d_max, const Curvature& family = curvature::Flat{},
                                              const EstimatorOptions& opts = {}) {
  if (d_min > d_max) throw NoCandidate("empty dimension range");
  if (d_min < 1) throw InvalidArgument("dimensions must be >= 1");
  const auto totals = aggregated_counts(s, grid, opts);
  const double m = static_cast<double>(s.size());
  const auto* pointwise = std::get_if<curvature::PointwiseScalar>(&family);
  std::optional<DimensionSearchResult> best;
  std::vector<std::pair<int, double>> scored;
  for (int n = d_min; n <= d_max; ++n) {
    const auto theo = theoretical_mdf(ManifoldModel(n, vol), grid);
    std::optional<DensityFunction> k_hat;
    std::string desc;
    try {
      if (pointwise) {
        k_hat = aggregated_mdf(s, grid, ManifoldModel(n, vol, family), opts);
        desc = "local_scalar(pointwise)";
      } else {
        ScalingFactor factor = ScalingFactor::flat(n);
        if (const auto* sf = std::get_if<curvature::Surface>(&family)) {
          factor = ScalingFactor::surface(sf->chi, sf->area);
        } else if (const auto* hs = std::get_if<curvature::Hypersurface>(&family)) {
          if (n < 2) continue;
          factor = ScalingFactor::hypersurface(hs->lambda1, n);
        }
        k_hat = detail::scale_counts(grid, totals, m, factor);
        desc = factor.describe();
      }
    } catch (const SingularScaling&) {
      continue;
    }
    auto report = manifold_score(theo, *k_hat, s.size(), desc);
    scored.emplace_back(n, report.score);
    if (!best || report.score > best->report.score) {
      best = DimensionSearchResult{n, std::move(report), {}};
    }
  }
  if (!best) throw NoCandidate("no admissible dimension in range");
  best->candidates = std::move(scored);
  return *best;
}

/// Volume estimate for fully intrinsic runs: least-squares fit of
/// K_hat(r) ~ c * vol(B^n(r)) over the smallest `fraction` of the grid,
/// returning 1/c.
inline double fit_volume(const DensityFunction& k_hat, int n, double fraction = 0.25) {
  const auto& grid = k_hat.grid();
  const std::size_t count =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(fraction * grid.size())), 2,
                              grid.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double b = euclidean_ball_volume(n, grid[i]);
    num += k_hat[i] * b;
    den += b * b;
  }
  if (!(num > 0.0) || !(den > 0.0)) throw InvalidArgument("cannot fit a volume to an empty MDF");
  return den / num;
}

}  // namespace mdf
