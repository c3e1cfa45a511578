#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hgnn/hypergraph.hpp"
#include "hgnn/matrix.hpp"

namespace hgnn {

/// Undirected edge list; u != v and both < n_vertices.
struct EdgeList {
  std::vector<std::pair<VertexId, VertexId>> pairs;
};

enum class DistanceMetric { Euclidean };

/// Normalizer used by probability_adjacency.
enum class AverageMode {
  MeanDistance,         // mean of unsquared pairwise distances (as printed)
  MeanSquaredDistance,  // mean of squared pairwise distances
};

/// Throws NonFiniteFeature if any entry is NaN/inf or DimMismatch if there are no columns.
void validate_features(const Matrix& x);

/// One hyperedge per vertex: the vertex itself plus its k nearest neighbours.
/// Equidistant candidates resolve to the smaller vertex index. Throws KTooLarge
/// unless 1 <= k <= n-1, NonFiniteFeature on NaN/inf input.
Hypergraph knn_hyperedges(const Matrix& x, std::size_t k,
                          DistanceMetric metric = DistanceMetric::Euclidean);

/// Hyperedge i = {i} ∪ neighbours(i). Out-of-range endpoints and self loops
/// throw IndexOutOfRange.
Hypergraph graph_neighborhood_hyperedges(const EdgeList& edges, std::size_t n_vertices);

/// A_ij = exp(-2 D_ij^2 / avg), where avg is taken over unordered distinct pairs.
/// Throws DegenerateDistances when avg == 0 or n < 2.
Matrix probability_adjacency(const Matrix& x, AverageMode mode = AverageMode::MeanDistance);

/// Elementwise mean. Throws EmptyInputList or ShapeMismatch.
Matrix average_adjacency(std::span<const Matrix> mats);

/// Dense symmetric 0/1 adjacency of an edge list (no self loops).
Matrix adjacency_from_edges(const EdgeList& edges, std::size_t n_vertices);

}  // namespace hgnn
