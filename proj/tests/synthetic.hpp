#pragma once

// Synthetic datasets shared by the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <vector>

#include "hgnn/matrix.hpp"
#include "hgnn/nn.hpp"

namespace synthetic {

struct Clusters {
  hgnn::Matrix x;
  hgnn::LabelVector labels;
  hgnn::SplitSpec split;
};

/// `classes` Gaussian blobs with unit noise around means spaced `separation`
/// apart on distinct axes; the first `labeled` vertices of each class train,
/// the rest test.
inline Clusters gaussian_clusters(std::size_t per_class, std::size_t classes, std::size_t dim, double separation,
                                  std::size_t labeled, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Clusters c;
  c.x = hgnn::Matrix(per_class * classes, dim);
  for (std::size_t k = 0; k < classes; ++k) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::size_t v = k * per_class + i;
      for (std::size_t d = 0; d < dim; ++d) c.x(v, d) = noise(rng) + (d % classes == k ? separation : 0.0);
      c.labels.push_back(static_cast<int>(k));
      (i < labeled ? c.split.train : c.split.test).push_back(v);
    }
  }
  return c;
}

struct TwoModalities {
  hgnn::Matrix a;  // separates classes 0 and 1; classes 2 and 3 share one mean
  hgnn::Matrix b;  // separates classes 2 and 3; classes 0 and 1 share one mean
  hgnn::LabelVector labels;
  hgnn::SplitSpec split;
};

/// Four classes seen through two feature spaces, each of which resolves only
/// one pair of classes.
inline TwoModalities two_modalities(std::size_t per_class, std::size_t dim, double separation, double noise_sd,
                                    std::size_t labeled, std::size_t validation, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sd);
  TwoModalities m;
  const std::size_t n = 4 * per_class;
  m.a = hgnn::Matrix(n, dim);
  m.b = hgnn::Matrix(n, dim);
  // Mean "slot" per class in each modality: A gives {0,1} their own slots and
  // lumps {2,3} together; B does the reverse.
  const std::size_t slot_a[4] = {0, 1, 2, 2};
  const std::size_t slot_b[4] = {2, 2, 0, 1};
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::size_t v = k * per_class + i;
      for (std::size_t d = 0; d < dim; ++d) {
        m.a(v, d) = noise(rng) + (d % 3 == slot_a[k] ? separation : 0.0);
        m.b(v, d) = noise(rng) + (d % 3 == slot_b[k] ? separation : 0.0);
      }
      m.labels.push_back(static_cast<int>(k));
      if (i < labeled)
        m.split.train.push_back(v);
      else if (i < labeled + validation)
        m.split.validation.push_back(v);
      else
        m.split.test.push_back(v);
    }
  }
  return m;
}

inline hgnn::Matrix hconcat(const hgnn::Matrix& l, const hgnn::Matrix& r) {
  hgnn::Matrix out(l.rows(), l.cols() + r.cols());
  for (std::size_t i = 0; i < l.rows(); ++i) {
    for (std::size_t j = 0; j < l.cols(); ++j) out(i, j) = l(i, j);
    for (std::size_t j = 0; j < r.cols(); ++j) out(i, l.cols() + j) = r(i, j);
  }
  return out;
}

}  // namespace synthetic
