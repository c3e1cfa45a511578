#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hgnn/hypergraph.hpp"
#include "hgnn/matrix.hpp"

namespace hgnn {

using LabelVector = std::vector<int>;

/// Seeded generator with a platform-independent uniform draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct LayerParams {
  Matrix weight;  // C_in x C_out
};

/// Two-layer hyperedge-convolution classifier, no bias terms:
///   logits = P · dropout(ReLU(P · X · W1)) · W2
struct HGNNModel {
  LayerParams layer1;
  LayerParams layer2;
  /// Bumped on every parameter update; forward caches record it.
  std::uint64_t revision = 0;

  std::size_t input_dim() const noexcept { return layer1.weight.rows(); }
  std::size_t hidden_dim() const noexcept { return layer1.weight.cols(); }
  std::size_t n_classes() const noexcept { return layer2.weight.cols(); }
};

/// Uniform Glorot initialization, layer 1 then layer 2, row-major draws.
HGNNModel init_model(std::size_t input_dim, std::size_t hidden_dim, std::size_t n_classes, Rng& rng);

struct TrainConfig {
  double learning_rate = 0.001;
  double dropout_p = 0.5;
  std::size_t hidden_dim = 16;
  std::size_t epochs = 200;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  /// 0 disables early stopping; otherwise the best-validation model is returned.
  std::size_t early_stop_patience = 0;
  /// L2 penalty folded into the gradient before the Adam update.
  double weight_decay = 0.0;
};

/// Throws InvalidConfig on out-of-range rates or dimensions.
void validate(const TrainConfig& cfg);

struct AdamState {
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  std::uint64_t step_count = 0;
};

enum class Mode { Train, Eval };

struct ForwardCache {
  std::shared_ptr<const Matrix> propagated_input;  // P X
  Matrix preactivation;                            // P X W1
  Matrix dropout_scale;                            // empty in eval mode
  Matrix hidden;                                   // dropout(ReLU(pre))
  Matrix propagated_hidden;                        // P hidden
  std::uint64_t revision = 0;
  bool valid = false;
};

struct ForwardResult {
  Matrix logits;
  ForwardCache cache;
};

struct Gradients {
  Matrix layer1;
  Matrix layer2;
};

/// Θ_norm · X · W, ordered to minimise work (projection first when C_out < C_in).
Matrix hyperconv_forward(const NormalizedOperator& theta_norm, const Matrix& x, const LayerParams& layer);
Matrix hyperconv_forward(const CsrMatrix& propagation, const Matrix& x, const LayerParams& layer);

/// Full two-layer forward. `propagation` must be symmetric (backward relies on it).
/// Dropout (train mode, p > 0) uses inverted scaling 1/(1-p).
ForwardResult model_forward(const HGNNModel& m, const NormalizedOperator& theta_norm, const Matrix& x,
                            Mode mode, double dropout_p, Rng& rng);
ForwardResult model_forward(const HGNNModel& m, const CsrMatrix& propagation, const Matrix& x,
                            Mode mode, double dropout_p, Rng& rng);
/// Forward from precomputed P·X (shared across epochs by the trainer).
ForwardResult model_forward_propagated(const HGNNModel& m, const CsrMatrix& propagation,
                                       std::shared_ptr<const Matrix> propagated_input, Mode mode,
                                       double dropout_p, Rng& rng);

struct LossResult {
  double loss = 0.0;
  Matrix probs;  // row-wise softmax of all logits
};

/// Mean negative log-likelihood over the masked rows. Throws EmptyMask,
/// IndexOutOfRange (row or label).
LossResult softmax_cross_entropy(const Matrix& logits, const LabelVector& labels,
                                 std::span<const std::size_t> mask);

/// Gradients of the masked mean cross-entropy w.r.t. W1 and W2.
/// Throws StaleCache if the cache came from another parameter revision.
Gradients backward(const HGNNModel& m, const CsrMatrix& propagation, const ForwardCache& cache,
                   const Matrix& probs, const LabelVector& labels, std::span<const std::size_t> mask);
Gradients backward(const HGNNModel& m, const NormalizedOperator& theta_norm, const ForwardCache& cache,
                   const Matrix& probs, const LabelVector& labels, std::span<const std::size_t> mask);

/// Bias-corrected Adam over an ordered list of parameter tensors. An empty state is
/// initialised on first use; later shape disagreement throws ShapeMismatch.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads, AdamState& state,
               const TrainConfig& cfg);
void adam_step(HGNNModel& m, const Gradients& grads, AdamState& state, const TrainConfig& cfg);

struct SplitSpec {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<double> val_loss;
  std::optional<double> val_acc;
};

struct TrainResult {
  HGNNModel model;
  std::vector<EpochRecord> history;
  std::vector<std::string> warnings;
  std::size_t best_epoch = 0;  // 0 when the final model is returned
};

/// Full-batch training on the hypergraph's normalized operator.
/// Throws DisjointnessViolation, IndexOutOfRange, DimMismatch, EmptyMask.
TrainResult train(const Hypergraph& g, const Matrix& x, const LabelVector& labels, const SplitSpec& split,
                  const TrainConfig& cfg);
/// Same loop over an arbitrary symmetric propagation matrix (GCN baseline).
TrainResult train_with_propagation(const CsrMatrix& propagation, const Matrix& x, const LabelVector& labels,
                                   const SplitSpec& split, const TrainConfig& cfg);

/// Row-wise argmax, ties to the lowest class index.
std::vector<int> argmax_rows(const Matrix& logits);

/// Fraction of index_set whose argmax prediction equals the label. Throws EmptyIndexSet.
double accuracy(const Matrix& logits, const LabelVector& labels, std::span<const std::size_t> index_set);
double evaluate(const HGNNModel& m, const Hypergraph& g, const Matrix& x, const LabelVector& labels,
                std::span<const std::size_t> index_set);
double evaluate(const HGNNModel& m, const CsrMatrix& propagation, const Matrix& x, const LabelVector& labels,
                std::span<const std::size_t> index_set);

/// D^{-1/2} A D^{-1/2} with D the row sums of A (zero rows stay zero).
/// Throws NotSymmetric.
CsrMatrix gcn_propagation(const Matrix& adj);
/// D^{-1/2} A D^{-1/2} X W. Throws NotSymmetric or DimMismatch.
Matrix gcn_forward(const Matrix& adj, const Matrix& x, const LayerParams& layer);

}  // namespace hgnn
