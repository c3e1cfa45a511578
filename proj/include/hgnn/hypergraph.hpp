#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hgnn/matrix.hpp"

namespace hgnn {

using VertexId = std::size_t;
using EdgeId = std::size_t;

/// Immutable weighted hypergraph stored as a column-compressed binary incidence
/// matrix: one sorted, duplicate-free vertex list per hyperedge plus the
/// diagonal of the hyperedge weight matrix W.
class Hypergraph {
 public:
  Hypergraph() = default;

  /// Validates and canonicalizes (sorts) each hyperedge. Omitted weights are all 1.
  /// Throws EmptyHyperedge, IndexOutOfRange, NonPositiveWeight, DuplicateVertexInEdge,
  /// or ShapeMismatch when the weight count differs from the edge count.
  Hypergraph(std::size_t n_vertices, const std::vector<std::vector<VertexId>>& hyperedges,
             std::optional<std::vector<double>> weights = std::nullopt);

  std::size_t n_vertices() const noexcept { return n_vertices_; }
  std::size_t n_edges() const noexcept { return weights_.size(); }
  std::size_t nnz() const noexcept { return members_.size(); }

  /// Sorted vertices of hyperedge e.
  std::span<const VertexId> edge(EdgeId e) const noexcept {
    return {members_.data() + edge_ptr_[e], edge_ptr_[e + 1] - edge_ptr_[e]};
  }
  double weight(EdgeId e) const noexcept { return weights_[e]; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const std::size_t> edge_ptr() const noexcept { return edge_ptr_; }
  std::span<const VertexId> members() const noexcept { return members_; }

  /// Dense H (n_vertices x n_edges), entries 0 or 1.
  Matrix incidence_dense() const;

  bool operator==(const Hypergraph& other) const = default;

 private:
  std::size_t n_vertices_ = 0;
  std::vector<std::size_t> edge_ptr_{0};
  std::vector<VertexId> members_;
  std::vector<double> weights_;
};

/// build_hypergraph: same contract as the Hypergraph constructor.
Hypergraph build_hypergraph(const std::vector<std::vector<VertexId>>& hyperedges,
                            std::size_t n_vertices,
                            std::optional<std::vector<double>> weights = std::nullopt);

struct DegreeVectors {
  std::vector<double> vertex;       // d(v) = Σ_e w(e) h(v,e)
  std::vector<std::size_t> edge;    // δ(e) = Σ_v h(v,e)
};

DegreeVectors compute_degrees(const Hypergraph& g);

/// Symmetric propagation matrix Dv^{-1/2} H W De^{-1} Hᵀ Dv^{-1/2}, row-compressed.
/// Rows and columns of isolated vertices (d(v) = 0) are empty.
class NormalizedOperator {
 public:
  NormalizedOperator() = default;
  explicit NormalizedOperator(CsrMatrix theta) : theta_(std::move(theta)) {}

  const CsrMatrix& matrix() const noexcept { return theta_; }
  std::size_t size() const noexcept { return theta_.rows(); }
  Matrix to_dense() const { return theta_.to_dense(); }

 private:
  CsrMatrix theta_;
};

NormalizedOperator normalized_theta(const Hypergraph& g);

/// Dv^{-1/2} with the zero-degree convention (entry 0 for isolated vertices).
std::vector<double> inv_sqrt_degrees(const DegreeVectors& deg);

/// Δ = I - Θ, dense.
Matrix laplacian(const NormalizedOperator& op);

/// Concatenates incidence columns (and weights) in input order.
/// Throws EmptyInputList or VertexCountMismatch.
Hypergraph concat_modalities(std::span<const Hypergraph> gs);

}  // namespace hgnn
