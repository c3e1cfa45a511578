#include "hgnn/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hgnn/error.hpp"
#include "hgnn/parallel.hpp"

namespace hgnn {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

void check_edge(const std::pair<VertexId, VertexId>& p, std::size_t n) {
  if (p.first >= n || p.second >= n) {
    fail(Errc::IndexOutOfRange, "edge (" + std::to_string(p.first) + ", " + std::to_string(p.second) +
                                    ") outside " + std::to_string(n) + " vertices");
  }
  if (p.first == p.second) {
    fail(Errc::IndexOutOfRange, "self loop on vertex " + std::to_string(p.first));
  }
}

}  // namespace

void validate_features(const Matrix& x) {
  if (x.cols() == 0) fail(Errc::DimMismatch, "feature matrix has no columns");
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (!std::isfinite(x(i, j)))
        fail(Errc::NonFiniteFeature, "feature (" + std::to_string(i) + ", " + std::to_string(j) + ")");
}

Hypergraph knn_hyperedges(const Matrix& x, std::size_t k, DistanceMetric metric) {
  (void)metric;  // Euclidean is the only metric; squared distance gives the same order.
  const std::size_t n = x.rows();
  if (k < 1 || n < 2 || k > n - 1) {
    fail(Errc::KTooLarge, "k = " + std::to_string(k) + " with " + std::to_string(n) + " vertices");
  }
  validate_features(x);

  std::vector<std::vector<VertexId>> edges(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<std::pair<double, VertexId>> cand;
    cand.reserve(n - 1);
    for (std::size_t i = begin; i < end; ++i) {
      cand.clear();
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) cand.emplace_back(squared_distance(x.row(i), x.row(j)), j);
      // Lexicographic (distance, index) order implements the lowest-index tie rule.
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
      std::vector<VertexId>& e = edges[i];
      e.push_back(i);
      for (std::size_t t = 0; t < k; ++t) e.push_back(cand[t].second);
    }
  });
  return Hypergraph(n, edges);
}

Hypergraph graph_neighborhood_hyperedges(const EdgeList& edges, std::size_t n_vertices) {
  std::vector<std::vector<VertexId>> nbrs(n_vertices);
  for (VertexId v = 0; v < n_vertices; ++v) nbrs[v].push_back(v);
  for (const auto& p : edges.pairs) {
    check_edge(p, n_vertices);
    nbrs[p.first].push_back(p.second);
    nbrs[p.second].push_back(p.first);
  }
  for (auto& e : nbrs) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }
  return Hypergraph(n_vertices, nbrs);
}

Matrix probability_adjacency(const Matrix& x, AverageMode mode) {
  const std::size_t n = x.rows();
  if (n < 2) fail(Errc::DegenerateDistances, "need at least two points");
  validate_features(x);

  Matrix sq(n, n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d2 = squared_distance(x.row(i), x.row(j));
      sq(i, j) = sq(j, i) = d2;
      total += mode == AverageMode::MeanDistance ? std::sqrt(d2) : d2;
    }
  }
  double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  double avg = total / pairs;
  if (!(avg > 0.0)) fail(Errc::DegenerateDistances, "all points coincide");

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = std::exp(-2.0 * sq(i, j) / avg);
  return a;
}

Matrix average_adjacency(std::span<const Matrix> mats) {
  if (mats.empty()) fail(Errc::EmptyInputList, "average_adjacency of nothing");
  Matrix sum = mats.front();
  for (std::size_t i = 1; i < mats.size(); ++i) {
    if (!mats[i].same_shape(sum)) fail(Errc::ShapeMismatch, "adjacency " + std::to_string(i));
    sum = sum + mats[i];
  }
  return (1.0 / static_cast<double>(mats.size())) * sum;
}

Matrix adjacency_from_edges(const EdgeList& edges, std::size_t n_vertices) {
  Matrix a(n_vertices, n_vertices);
  for (const auto& p : edges.pairs) {
    check_edge(p, n_vertices);
    a(p.first, p.second) = a(p.second, p.first) = 1.0;
  }
  return a;
}

}  // namespace hgnn
