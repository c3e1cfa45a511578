#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hgnn/hypergraph.hpp"
#include "hgnn/matrix.hpp"

namespace hgnn {

/// Largest matrix accepted by the dense eigensolver.
inline constexpr std::size_t kMaxDenseEigen = 2000;

/// Ascending eigenvalues and orthonormal eigenvectors (columns of `vectors`).
struct SpectralDecomposition {
  std::vector<double> values;
  Matrix vectors;

  std::size_t size() const noexcept { return values.size(); }
};

/// Dense symmetric eigendecomposition (Householder tridiagonalization + implicit QL).
/// Each eigenvector is signed so its first nonzero component is positive.
/// Throws NotSymmetric or TooLarge (n > kMaxDenseEigen).
SpectralDecomposition eigendecompose(const Matrix& a);

/// Φ diag(g(λ_i)) Φᵀ x.
std::vector<double> exact_spectral_filter(std::span<const double> x,
                                          const std::function<double(double)>& g,
                                          const SpectralDecomposition& dec);

struct ChebyshevCoefficients {
  std::vector<double> thetas;  // θ_0 … θ_K
  double lambda_max = 2.0;
};

/// Σ_k θ_k T_k(Δ̃) x with Δ̃ = (2/λ_max) Δ - I, evaluated with the three-term
/// recurrence on vectors.
std::vector<double> chebyshev_filter(std::span<const double> x, const ChebyshevCoefficients& coeffs,
                                     const Matrix& delta);
/// Same, with Δ = I - Θ applied through the sparse operator.
std::vector<double> chebyshev_filter(std::span<const double> x, const ChebyshevCoefficients& coeffs,
                                     const NormalizedOperator& op);

/// Scalar Σ_k θ_k T_k((2/λ_max) λ - 1): the spectral response of chebyshev_filter.
double chebyshev_response(const ChebyshevCoefficients& coeffs, double lambda);

/// First-order filter with the single-parameter tying θ_1 = -θ/2 and
/// θ_0 = (θ/2) Dv^{-1/2} H De^{-1} Hᵀ Dv^{-1/2}, λ_max = 2. Equals
/// (θ/2) Dv^{-1/2} H (W + I) De^{-1} Hᵀ Dv^{-1/2} x, which is θ Θ x when W = I.
std::vector<double> tied_first_order_filter(const Hypergraph& g, std::span<const double> x,
                                            double theta);

/// Power-iteration estimate of the largest eigenvalue of a symmetric matrix.
double estimate_lambda_max(const Matrix& a, int max_iterations = 50, double tol = 1e-6);

/// Pairwise smoothness functional
///   ½ Σ_e Σ_{u,v ∈ e} w(e)/δ(e) (f(u)/√d(u) - f(v)/√d(v))²,
/// with isolated vertices contributing nothing. Equals fᵀΔf whenever f vanishes
/// on isolated vertices.
double regularizer_omega(const Hypergraph& g, std::span<const double> f);

/// fᵀ M f.
double quadratic_form(const Matrix& m, std::span<const double> f);

}  // namespace hgnn
