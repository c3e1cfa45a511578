#include "hgnn/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hgnn/error.hpp"

namespace hgnn {

Hypergraph::Hypergraph(std::size_t n_vertices, const std::vector<std::vector<VertexId>>& hyperedges,
                       std::optional<std::vector<double>> weights)
    : n_vertices_(n_vertices) {
  if (weights && weights->size() != hyperedges.size()) {
    fail(Errc::ShapeMismatch, std::to_string(weights->size()) + " weights for " +
                                  std::to_string(hyperedges.size()) + " hyperedges");
  }
  edge_ptr_.reserve(hyperedges.size() + 1);
  for (std::size_t e = 0; e < hyperedges.size(); ++e) {
    std::vector<VertexId> vs = hyperedges[e];
    if (vs.empty()) fail(Errc::EmptyHyperedge, "hyperedge " + std::to_string(e) + " has no vertices");
    std::sort(vs.begin(), vs.end());
    if (vs.back() >= n_vertices) {
      fail(Errc::IndexOutOfRange, "hyperedge " + std::to_string(e) + " references vertex " +
                                      std::to_string(vs.back()) + " >= " + std::to_string(n_vertices));
    }
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) {
      fail(Errc::DuplicateVertexInEdge, "hyperedge " + std::to_string(e) + " repeats a vertex");
    }
    members_.insert(members_.end(), vs.begin(), vs.end());
    edge_ptr_.push_back(members_.size());
  }
  if (weights) {
    for (std::size_t e = 0; e < weights->size(); ++e) {
      double w = (*weights)[e];
      if (!(w > 0.0) || !std::isfinite(w)) {
        fail(Errc::NonPositiveWeight, "hyperedge " + std::to_string(e) + " has weight " + std::to_string(w));
      }
    }
    weights_ = std::move(*weights);
  } else {
    weights_.assign(hyperedges.size(), 1.0);
  }
}

Matrix Hypergraph::incidence_dense() const {
  Matrix h(n_vertices_, n_edges());
  for (EdgeId e = 0; e < n_edges(); ++e)
    for (VertexId v : edge(e)) h(v, e) = 1.0;
  return h;
}

Hypergraph build_hypergraph(const std::vector<std::vector<VertexId>>& hyperedges,
                            std::size_t n_vertices, std::optional<std::vector<double>> weights) {
  return Hypergraph(n_vertices, hyperedges, std::move(weights));
}

DegreeVectors compute_degrees(const Hypergraph& g) {
  DegreeVectors d;
  d.vertex.assign(g.n_vertices(), 0.0);
  d.edge.resize(g.n_edges());
  for (EdgeId e = 0; e < g.n_edges(); ++e) {
    auto vs = g.edge(e);
    d.edge[e] = vs.size();
    for (VertexId v : vs) d.vertex[v] += g.weight(e);
  }
  return d;
}

std::vector<double> inv_sqrt_degrees(const DegreeVectors& deg) {
  std::vector<double> s(deg.vertex.size(), 0.0);
  for (std::size_t v = 0; v < s.size(); ++v)
    if (deg.vertex[v] > 0.0) s[v] = 1.0 / std::sqrt(deg.vertex[v]);
  return s;
}

NormalizedOperator normalized_theta(const Hypergraph& g) {
  const std::size_t n = g.n_vertices();
  DegreeVectors deg = compute_degrees(g);
  std::vector<double> s = inv_sqrt_degrees(deg);

  // Vertex -> incident hyperedges, ascending by edge id.
  std::vector<std::size_t> inc_ptr(n + 1, 0);
  for (VertexId v : g.members()) ++inc_ptr[v + 1];
  for (std::size_t v = 0; v < n; ++v) inc_ptr[v + 1] += inc_ptr[v];
  std::vector<EdgeId> inc(g.nnz());
  {
    std::vector<std::size_t> cursor(inc_ptr.begin(), inc_ptr.end() - 1);
    for (EdgeId e = 0; e < g.n_edges(); ++e)
      for (VertexId v : g.edge(e)) inc[cursor[v]++] = e;
  }

  std::vector<double> scale(g.n_edges());
  for (EdgeId e = 0; e < g.n_edges(); ++e)
    scale[e] = g.weight(e) / static_cast<double>(deg.edge[e]);

  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  std::vector<double> acc(n, 0.0);
  std::vector<char> touched(n, 0);
  std::vector<VertexId> pattern;
  for (VertexId i = 0; i < n; ++i) {
    pattern.clear();
    // Contributions to (i, j) arrive in ascending edge order for both (i, j) and (j, i),
    // and s_i * s_j commutes, so the stored matrix is exactly symmetric.
    for (std::size_t k = inc_ptr[i]; k < inc_ptr[i + 1]; ++k) {
      EdgeId e = inc[k];
      for (VertexId j : g.edge(e)) {
        if (!touched[j]) {
          touched[j] = 1;
          pattern.push_back(j);
        }
        acc[j] += scale[e] * (s[i] * s[j]);
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (VertexId j : pattern) {
      cols.push_back(j);
      vals.push_back(acc[j]);
      acc[j] = 0.0;
      touched[j] = 0;
    }
    row_ptr.push_back(cols.size());
  }
  return NormalizedOperator(CsrMatrix(n, n, std::move(row_ptr), std::move(cols), std::move(vals)));
}

Matrix laplacian(const NormalizedOperator& op) {
  Matrix delta = op.to_dense();
  for (double& v : delta.values()) v = -v;
  for (std::size_t i = 0; i < delta.rows(); ++i) delta(i, i) += 1.0;
  return delta;
}

Hypergraph concat_modalities(std::span<const Hypergraph> gs) {
  if (gs.empty()) fail(Errc::EmptyInputList, "concat_modalities needs at least one hypergraph");
  const std::size_t n = gs.front().n_vertices();
  std::vector<std::vector<VertexId>> edges;
  std::vector<double> weights;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Hypergraph& g = gs[i];
    if (g.n_vertices() != n) {
      fail(Errc::VertexCountMismatch, "input " + std::to_string(i) + " has " +
                                          std::to_string(g.n_vertices()) + " vertices, expected " +
                                          std::to_string(n));
    }
    for (EdgeId e = 0; e < g.n_edges(); ++e) {
      auto vs = g.edge(e);
      edges.emplace_back(vs.begin(), vs.end());
      weights.push_back(g.weight(e));
    }
  }
  return Hypergraph(n, edges, std::move(weights));
}

}  // namespace hgnn
