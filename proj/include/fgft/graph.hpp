#pragma once

// Random graph families and their combinatorial Laplacians.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "fgft/error.hpp"
#include "fgft/matrix.hpp"
#include "fgft/random.hpp"

namespace fgft {

enum class ModelKind { erdos_renyi, sbm, sensor, custom };

inline std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::erdos_renyi: return "erdos_renyi";
    case ModelKind::sbm: return "sbm";
    case ModelKind::sensor: return "sensor";
    case ModelKind::custom: return "custom";
  }
  return "custom";
}

inline ModelKind parse_model_kind(std::string_view name) {
  if (name == "erdos_renyi") return ModelKind::erdos_renyi;
  if (name == "sbm") return ModelKind::sbm;
  if (name == "sensor") return ModelKind::sensor;
  if (name == "custom") return ModelKind::custom;
  throw InvalidArgument("unknown graph model '" + std::string(name) + "'");
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Where a graph came from: generator, its parameters, the RNG stream, and
/// a few facts computed at generation time.
struct ModelInfo {
  ModelKind kind = ModelKind::custom;
  std::vector<std::pair<std::string, double>> params;
  RngSpec rng;
  std::size_t component_count = 0;
  std::vector<Point2> coordinates;  // sensor graphs only

  double param(std::string_view name, double fallback = 0.0) const {
    for (const auto& [key, value] : params)
      if (key == name) return value;
    return fallback;
  }
};

/// Undirected weighted graph stored as a dense symmetric adjacency matrix.
class Graph {
 public:
  Graph() = default;

  /// Validates symmetry (exact), zero diagonal and non-negativity.
  Graph(Matrix weights, ModelInfo info) : weights_(std::move(weights)), info_(std::move(info)) {
    require(weights_.square(), "graph: weight matrix must be square");
    require(weights_.rows() >= 1, "graph: needs at least one vertex");
    require(is_exactly_symmetric(weights_), "graph: weight matrix must be symmetric");
    for (std::size_t i = 0; i < size(); ++i) {
      require(weights_(i, i) == 0.0, "graph: self loops are not allowed");
      for (std::size_t j = 0; j < size(); ++j)
        require(weights_(i, j) >= 0.0, "graph: weights must be non-negative");
    }
    info_.component_count = count_components();
  }

  std::size_t size() const { return weights_.rows(); }
  const Matrix& weights() const { return weights_; }
  double weight(std::size_t i, std::size_t j) const { return weights_(i, j); }
  const ModelInfo& info() const { return info_; }

  std::vector<double> degrees() const {
    std::vector<double> d(size(), 0.0);
    for (std::size_t i = 0; i < size(); ++i)
      for (double w : weights_.row(i)) d[i] += w;
    return d;
  }

  std::size_t edge_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (weights_(i, j) != 0.0) ++count;
    return count;
  }

  double mean_degree() const {
    const auto d = degrees();
    return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(size());
  }

  std::size_t component_count() const { return info_.component_count; }

 private:
  std::size_t count_components() const {
    const std::size_t n = size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    std::size_t components = n;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (weights_(i, j) != 0.0) {
          const auto a = find(i), b = find(j);
          if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
            --components;
          }
        }
    return components;
  }

  Matrix weights_;
  ModelInfo info_;
};

/// Builds a graph from an explicit edge list (0-based, unordered pairs).
inline Graph make_graph(std::size_t n,
                        const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
  require(n >= 1, "graph: needs at least one vertex");
  Matrix w(n, n);
  for (const auto& [i, j, weight] : edges) {
    require(i < n && j < n, "graph: edge endpoint out of range");
    require(i != j, "graph: self loops are not allowed");
    w(i, j) = weight;
    w(j, i) = weight;
  }
  return Graph(std::move(w), ModelInfo{});
}

// Pairs (i, j), i < j, consume one uniform draw each in lexicographic order.
inline Graph erdos_renyi(std::size_t n, double p, RngSpec rng_spec) {
  require(n >= 2, "erdos_renyi: need n >= 2");
  require(p >= 0.0 && p <= 1.0, "erdos_renyi: probability must lie in [0, 1]");
  Rng rng(rng_spec);
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) w(i, j) = w(j, i) = 1.0;
  ModelInfo info;
  info.kind = ModelKind::erdos_renyi;
  info.params = {{"n", static_cast<double>(n)}, {"p", p}};
  info.rng = rng_spec;
  return Graph(std::move(w), std::move(info));
}

/// Detectability threshold of the symmetric SBM with average degree c and m
/// communities.
inline double sbm_epsilon_critical(double c, std::size_t m) {
  require(c > 0.0, "sbm_epsilon_critical: average degree must be positive");
  require(m >= 2, "sbm_epsilon_critical: need at least two communities");
  const double root = std::sqrt(c);
  return (c - root) / (c + root * static_cast<double>(m - 1));
}

/// Intra- and inter-community edge probabilities (q1, q2) realising average
/// degree c with q2 = epsilon * q1.
inline std::pair<double, double> sbm_probabilities(std::size_t n, std::size_t m, double c,
                                                   double epsilon) {
  require(m >= 1 && n % m == 0, "sbm: community count must divide n");
  require(c >= 0.0 && epsilon >= 0.0, "sbm: c and epsilon must be non-negative");
  const double block = static_cast<double>(n / m);
  const double denom = (block - 1.0) + epsilon * (static_cast<double>(n) - block);
  require(denom > 0.0, "sbm: degenerate parameters (no admissible pairs)");
  const double q1 = c / denom;
  const double q2 = epsilon * q1;
  require(q1 >= 0.0 && q1 <= 1.0 && q2 >= 0.0 && q2 <= 1.0,
          "sbm: derived edge probabilities fall outside [0, 1]");
  return {q1, q2};
}

inline std::size_t sbm_community(std::size_t vertex, std::size_t n, std::size_t m) {
  return vertex / (n / m);
}

// Communities are contiguous blocks of n/m vertices. Draw order matches
// erdos_renyi: one uniform per pair, lexicographic.
inline Graph sbm(std::size_t n, std::size_t m, double c, double epsilon, RngSpec rng_spec) {
  require(n >= 2, "sbm: need n >= 2");
  require(m >= 1, "sbm: need at least one community");
  const auto [q1, q2] = sbm_probabilities(n, m, c, epsilon);
  Rng rng(rng_spec);
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same = sbm_community(i, n, m) == sbm_community(j, n, m);
      if (rng.bernoulli(same ? q1 : q2)) w(i, j) = w(j, i) = 1.0;
    }
  ModelInfo info;
  info.kind = ModelKind::sbm;
  info.params = {{"n", static_cast<double>(n)}, {"m", static_cast<double>(m)}, {"c", c},
                 {"epsilon", epsilon}, {"q1", q1}, {"q2", q2}};
  info.rng = rng_spec;
  return Graph(std::move(w), std::move(info));
}

// Coordinates are drawn first (x then y per vertex); edges need no draws.
inline Graph random_sensor(std::size_t n, double tau, RngSpec rng_spec) {
  require(n >= 2, "random_sensor: need n >= 2");
  require(tau > 0.0, "random_sensor: threshold must be positive");
  Rng rng(rng_spec);
  std::vector<Point2> points(n);
  for (auto& pt : points) {
    pt.x = rng.uniform();
    pt.y = rng.uniform();
  }
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::hypot(points[i].x - points[j].x, points[i].y - points[j].y) < tau)
        w(i, j) = w(j, i) = 1.0;
  ModelInfo info;
  info.kind = ModelKind::sensor;
  info.params = {{"n", static_cast<double>(n)}, {"tau", tau}};
  info.rng = rng_spec;
  info.coordinates = std::move(points);
  return Graph(std::move(w), std::move(info));
}

/// Combinatorial Laplacian D − W.
class Laplacian {
 public:
  explicit Laplacian(const Graph& g) : entries_(g.size(), g.size()) {
    const auto d = g.degrees();
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        entries_(i, j) = (i == j ? d[i] : 0.0) - g.weight(i, j);
  }

  std::size_t size() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

inline Laplacian laplacian(const Graph& g) { return Laplacian(g); }

/// 0-based permutation sorting vertices by non-decreasing degree, ties by index.
inline std::vector<std::size_t> degree_permutation(std::span<const double> degrees) {
  std::vector<std::size_t> sigma(degrees.size());
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::stable_sort(sigma.begin(), sigma.end(),
                   [&](std::size_t a, std::size_t b) { return degrees[a] < degrees[b]; });
  return sigma;
}

inline std::vector<std::size_t> degree_permutation(const Graph& g) {
  const auto d = g.degrees();
  return degree_permutation(std::span<const double>(d));
}

}  // namespace fgft
