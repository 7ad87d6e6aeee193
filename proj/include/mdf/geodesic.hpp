#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"

namespace mdf {

struct Edge {
  std::size_t to;
  double weight;
};

/// Undirected weighted graph on m vertices. Adjacency lists are sorted by
/// neighbor index; every edge is stored in both directions with the same
/// weight. Zero weights only occur between coincident points.
class NeighborGraph {
 public:
  explicit NeighborGraph(std::size_t m) : adjacency_(m) {}

  /// Adds the undirected edge {a, b} unless it is already present.
  void add_edge(std::size_t a, std::size_t b, double w) {
    if (a == b) throw InvalidArgument("self-loops are not allowed");
    if (a >= size() || b >= size()) throw InvalidArgument("edge endpoint out of range");
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("edge weights must be >= 0");
    insert(a, b, w);
    insert(b, a, w);
  }

  std::size_t size() const noexcept { return adjacency_.size(); }
  const std::vector<Edge>& neighbors(std::size_t v) const noexcept { return adjacency_[v]; }

  std::size_t edge_count() const noexcept {
    std::size_t n = 0;
    for (const auto& a : adjacency_) n += a.size();
    return n / 2;
  }

  bool has_edge(std::size_t a, std::size_t b) const {
    const auto& adj = adjacency_[a];
    auto it = std::lower_bound(adj.begin(), adj.end(), b,
                               [](const Edge& e, std::size_t v) { return e.to < v; });
    return it != adj.end() && it->to == b;
  }

  /// Component label of every vertex. Labels are numbered in order of each
  /// component's smallest vertex.
  std::vector<std::size_t> component_labels() const {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> label(size(), unset);
    std::vector<std::size_t> stack;
    std::size_t next = 0;
    for (std::size_t s = 0; s < size(); ++s) {
      if (label[s] != unset) continue;
      label[s] = next;
      stack.push_back(s);
      while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (const auto& e : adjacency_[v]) {
          if (label[e.to] == unset) {
            label[e.to] = next;
            stack.push_back(e.to);
          }
        }
      }
      ++next;
    }
    return label;
  }

  /// One representative vertex (the smallest index) per connected component.
  std::vector<std::size_t> component_representatives() const {
    const auto label = component_labels();
    std::vector<std::size_t> reps;
    for (std::size_t v = 0; v < size(); ++v) {
      if (label[v] == reps.size()) reps.push_back(v);
    }
    return reps;
  }

 private:
  void insert(std::size_t from, std::size_t to, double w) {
    auto& adj = adjacency_[from];
    auto it = std::lower_bound(adj.begin(), adj.end(), to,
                               [](const Edge& e, std::size_t v) { return e.to < v; });
    if (it != adj.end() && it->to == to) return;
    adj.insert(it, Edge{to, w});
  }

  std::vector<std::vector<Edge>> adjacency_;
};

/// k-nearest-neighbor graph under the Euclidean metric, union-symmetrized:
/// {i, j} is an edge if either endpoint selected the other. Distance ties are
/// broken toward the lower index.
inline NeighborGraph knn_graph(const PointSample& points, std::size_t k) {
  const std::size_t m = points.size();
  if (k < 1 || k >= m) {
    throw InvalidArgument("k must satisfy 1 <= k < m (k=" + std::to_string(k) +
                          ", m=" + std::to_string(m) + ")");
  }
  NeighborGraph g(m);
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    cand.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) cand.emplace_back(euclidean_distance(points.point(i), points.point(j)), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    for (std::size_t t = 0; t < k; ++t) g.add_edge(i, cand[t].second, cand[t].first);
  }
  return g;
}

/// What to do when the neighbor graph has more than one component.
enum class Disconnected { Error, Bridge };

/// Joins every pair of components by its shortest Euclidean edge (ties toward
/// the lexicographically smaller vertex pair). Returns the number of edges added.
inline std::size_t bridge_components(NeighborGraph& g, const PointSample& points) {
  if (points.size() != g.size()) throw ShapeError("graph and point sample sizes differ");
  const auto label = g.component_labels();
  const std::size_t c = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  if (c < 2) return 0;
  struct Best {
    double d = std::numeric_limits<double>::infinity();
    std::size_t a = 0, b = 0;
  };
  std::vector<Best> best(c * c);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (label[i] == label[j]) continue;
      auto& slot = best[std::min(label[i], label[j]) * c + std::max(label[i], label[j])];
      const double d = euclidean_distance(points.point(i), points.point(j));
      if (d < slot.d) slot = {d, i, j};
    }
  }
  std::size_t added = 0;
  for (std::size_t x = 0; x < c; ++x) {
    for (std::size_t y = x + 1; y < c; ++y) {
      const auto& b = best[x * c + y];
      g.add_edge(b.a, b.b, b.d);
      ++added;
    }
  }
  return added;
}

/// All-pairs shortest-path distances by one priority-queue search per source.
inline DistanceMatrix shortest_path_matrix(const NeighborGraph& g, std::size_t workers = 1) {
  const std::size_t m = g.size();
  if (m == 0) throw InvalidArgument("empty graph");
  const auto reps = g.component_representatives();
  if (reps.size() > 1) {
    std::string msg = "neighbor graph is disconnected (" + std::to_string(reps.size()) +
                      " components; one vertex each:";
    for (std::size_t r : reps) msg += " " + std::to_string(r);
    throw ConnectivityError(msg + ")", reps);
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> out(m * m, inf);
  parallel_for(m, workers, [&](std::size_t src) {
    double* dist = out.data() + src * m;
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
      const auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (const auto& e : g.neighbors(v)) {
        const double nd = d + e.weight;
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          pq.emplace(nd, e.to);
        }
      }
    }
  });
  return validate_distance_matrix(out, m, m, false);
}

/// Geodesic distance estimate from a point cloud (kNN graph + shortest paths).
/// With Disconnected::Bridge, components are joined by bridge_components
/// instead of raising ConnectivityError.
inline DistanceMatrix graph_geodesic_distances(const PointSample& points, std::size_t k,
                                               std::size_t workers = 1,
                                               Disconnected policy = Disconnected::Error) {
  auto g = knn_graph(points, k);
  if (policy == Disconnected::Bridge) bridge_components(g, points);
  return shortest_path_matrix(g, workers);
}

/// Projects centered data onto its top `target_dim` principal directions.
/// Directions are ordered by descending variance and oriented so that their
/// largest-magnitude component is positive.
inline PointSample pca_embed(const PointSample& points, std::size_t target_dim) {
  const std::size_t m = points.size();
  const std::size_t d = points.dimension();
  if (target_dim < 1 || target_dim > d) {
    throw InvalidArgument("pca target dimension must lie in [1, " + std::to_string(d) + "]");
  }
  Eigen::MatrixXd x(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) x(i, k) = points(i, k);
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(std::max<std::size_t>(m, 2) - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("pca: eigendecomposition failed");
  // Eigen returns eigenvalues in ascending order.
  Eigen::MatrixXd basis(d, target_dim);
  for (std::size_t c = 0; c < target_dim; ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(d - 1 - c));
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    basis.col(static_cast<Eigen::Index>(c)) = v;
  }
  const Eigen::MatrixXd y = x * basis;
  std::vector<double> coords(m * target_dim);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < target_dim; ++c) {
      coords[i * target_dim + c] = y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    }
  }
  return PointSample(m, target_dim, std::move(coords), points.seed(), points.sampler() + "+pca");
}

}  // namespace mdf
