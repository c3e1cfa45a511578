#include "hgnn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hgnn/error.hpp"

namespace hgnn {
namespace {

// Householder reduction to tridiagonal form. On exit v holds the orthogonal
// transform, d the diagonal and e the subdiagonal (e[0] = 0).
void tridiagonalize(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.rows();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL iterations on the tridiagonal (d, e), accumulating rotations into v.
void ql_implicit(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.rows();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 200) fail(Errc::NotSymmetric, "QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            h = v(k, ii + 1);
            v(k, ii + 1) = s * v(k, ii) + c * h;
            v(k, ii) = c * v(k, ii) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

std::vector<double> apply_laplacian(const NormalizedOperator& op, std::span<const double> x) {
  std::vector<double> y = op.matrix().multiply(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - y[i];
  return y;
}

std::vector<double> chebyshev_apply(
    std::span<const double> x, const ChebyshevCoefficients& coeffs,
    const std::function<std::vector<double>(std::span<const double>)>& apply_delta) {
  if (coeffs.thetas.empty()) fail(Errc::DimMismatch, "Chebyshev expansion needs K >= 0 (one coefficient)");
  if (!(coeffs.lambda_max > 0.0)) fail(Errc::InvalidConfig, "lambda_max must be positive");
  const std::size_t n = x.size();
  const double a = 2.0 / coeffs.lambda_max;
  auto scaled = [&](std::span<const double> v) {
    std::vector<double> y = apply_delta(v);
    for (std::size_t i = 0; i < n; ++i) y[i] = a * y[i] - v[i];
    return y;
  };

  std::vector<double> out(n);
  std::vector<double> prev(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i) out[i] = coeffs.thetas[0] * prev[i];
  if (coeffs.thetas.size() == 1) return out;

  std::vector<double> cur = scaled(prev);
  for (std::size_t i = 0; i < n; ++i) out[i] += coeffs.thetas[1] * cur[i];
  for (std::size_t k = 2; k < coeffs.thetas.size(); ++k) {
    std::vector<double> next = scaled(cur);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = 2.0 * next[i] - prev[i];
      out[i] += coeffs.thetas[k] * next[i];
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return out;
}

}  // namespace

SpectralDecomposition eigendecompose(const Matrix& a) {
  if (a.rows() != a.cols()) fail(Errc::NotSymmetric, "matrix is not square");
  const std::size_t n = a.rows();
  if (n > kMaxDenseEigen) {
    fail(Errc::TooLarge, std::to_string(n) + " > " + std::to_string(kMaxDenseEigen) + " rows");
  }
  double scale = 0.0;
  for (double v : a.values()) scale = std::max(scale, std::abs(v));
  if (asymmetry(a) > 1e-10 * std::max(1.0, scale)) fail(Errc::NotSymmetric, "asymmetric input");

  SpectralDecomposition dec;
  if (n == 0) return dec;
  Matrix v = a;
  std::vector<double> d(n), e(n);
  tridiagonalize(v, d, e);
  ql_implicit(v, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });

  dec.values.resize(n);
  dec.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t src = order[c];
    dec.values[c] = d[src];
    double sign = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (std::abs(v(r, src)) > 1e-12) {
        sign = v(r, src) < 0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t r = 0; r < n; ++r) dec.vectors(r, c) = sign * v(r, src);
  }
  return dec;
}

std::vector<double> exact_spectral_filter(std::span<const double> x,
                                          const std::function<double(double)>& g,
                                          const SpectralDecomposition& dec) {
  const std::size_t n = dec.size();
  if (x.size() != n) fail(Errc::DimMismatch, "signal length does not match decomposition");
  const Matrix& phi = dec.vectors;
  std::vector<double> coeff(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += phi(r, c) * x[r];
    coeff[c] = g(dec.values[c]) * s;
  }
  std::vector<double> y(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += phi(r, c) * coeff[c];
    y[r] = s;
  }
  return y;
}

std::vector<double> chebyshev_filter(std::span<const double> x, const ChebyshevCoefficients& coeffs,
                                     const Matrix& delta) {
  if (delta.rows() != x.size() || delta.cols() != x.size())
    fail(Errc::DimMismatch, "signal length does not match Laplacian");
  return chebyshev_apply(x, coeffs, [&](std::span<const double> v) { return matvec(delta, v); });
}

std::vector<double> chebyshev_filter(std::span<const double> x, const ChebyshevCoefficients& coeffs,
                                     const NormalizedOperator& op) {
  if (op.size() != x.size()) fail(Errc::DimMismatch, "signal length does not match operator");
  return chebyshev_apply(x, coeffs, [&](std::span<const double> v) { return apply_laplacian(op, v); });
}

double chebyshev_response(const ChebyshevCoefficients& coeffs, double lambda) {
  if (coeffs.thetas.empty()) return 0.0;
  double t = 2.0 / coeffs.lambda_max * lambda - 1.0;
  double prev = 1.0;
  double out = coeffs.thetas[0];
  if (coeffs.thetas.size() == 1) return out;
  double cur = t;
  out += coeffs.thetas[1] * cur;
  for (std::size_t k = 2; k < coeffs.thetas.size(); ++k) {
    double next = 2.0 * t * cur - prev;
    out += coeffs.thetas[k] * next;
    prev = cur;
    cur = next;
  }
  return out;
}

std::vector<double> tied_first_order_filter(const Hypergraph& g, std::span<const double> x,
                                            double theta) {
  const std::size_t n = g.n_vertices();
  if (x.size() != n) fail(Errc::DimMismatch, "signal length does not match hypergraph");
  DegreeVectors deg = compute_degrees(g);
  std::vector<double> s = inv_sqrt_degrees(deg);

  // θ_0 term: (θ/2) Dv^{-1/2} H De^{-1} Hᵀ Dv^{-1/2} x, i.e. the operator with unit
  // hyperedge weights but the weighted vertex degrees.
  std::vector<double> out(n, 0.0);
  for (EdgeId e = 0; e < g.n_edges(); ++e) {
    double gathered = 0.0;
    for (VertexId v : g.edge(e)) gathered += s[v] * x[v];
    gathered /= static_cast<double>(deg.edge[e]);
    for (VertexId u : g.edge(e)) out[u] += 0.5 * theta * s[u] * gathered;
  }

  // θ_1 T_1(Δ̃) x with λ_max = 2, through the generic recurrence.
  ChebyshevCoefficients first{{0.0, -0.5 * theta}, 2.0};
  std::vector<double> t1 = chebyshev_filter(x, first, normalized_theta(g));
  for (std::size_t i = 0; i < n; ++i) out[i] += t1[i];
  return out;
}

double estimate_lambda_max(const Matrix& a, int max_iterations, double tol) {
  const std::size_t n = a.rows();
  if (n == 0) return 0.0;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + static_cast<double>(i % 7) / 7.0;
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm == 0.0) return 0.0;
    for (double& x : v) x /= norm;
    std::vector<double> w = matvec(a, v);
    double next = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
    v = std::move(w);
    if (it > 0 && std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) return next;
    lambda = next;
  }
  return lambda;
}

double regularizer_omega(const Hypergraph& g, std::span<const double> f) {
  if (f.size() != g.n_vertices()) fail(Errc::DimMismatch, "signal length does not match hypergraph");
  DegreeVectors deg = compute_degrees(g);
  std::vector<double> s = inv_sqrt_degrees(deg);
  double total = 0.0;
  for (EdgeId e = 0; e < g.n_edges(); ++e) {
    auto vs = g.edge(e);
    double c = g.weight(e) / static_cast<double>(deg.edge[e]);
    double edge_sum = 0.0;
    // Unordered pairs once; equals ½ of the ordered double sum.
    for (std::size_t a = 0; a < vs.size(); ++a) {
      for (std::size_t b = a + 1; b < vs.size(); ++b) {
        double diff = f[vs[a]] * s[vs[a]] - f[vs[b]] * s[vs[b]];
        edge_sum += diff * diff;
      }
    }
    total += c * edge_sum;
  }
  return total;
}

double quadratic_form(const Matrix& m, std::span<const double> f) {
  std::vector<double> mf = matvec(m, f);
  return std::inner_product(f.begin(), f.end(), mf.begin(), 0.0);
}

}  // namespace hgnn
