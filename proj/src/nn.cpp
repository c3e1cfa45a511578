#include "hgnn/nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hgnn/error.hpp"

namespace hgnn {
namespace {

void check_rows(const CsrMatrix& p, const Matrix& x) {
  if (p.cols() != x.rows()) {
    fail(Errc::DimMismatch, "operator has " + std::to_string(p.cols()) + " columns, features have " +
                                std::to_string(x.rows()) + " rows");
  }
}

void check_model(const HGNNModel& m, std::size_t input_cols) {
  if (m.layer1.weight.rows() != input_cols) {
    fail(Errc::DimMismatch, "layer 1 expects " + std::to_string(m.layer1.weight.rows()) +
                                " input features, got " + std::to_string(input_cols));
  }
  if (m.layer1.weight.cols() != m.layer2.weight.rows()) {
    fail(Errc::DimMismatch, "layer 1 output does not match layer 2 input");
  }
}

void check_indices(std::span<const std::size_t> idx, std::size_t n, const char* what) {
  for (std::size_t i : idx)
    if (i >= n) fail(Errc::IndexOutOfRange, std::string(what) + " index " + std::to_string(i));
}

double mean_loss_on(const Matrix& logits, const LabelVector& labels, std::span<const std::size_t> idx) {
  return softmax_cross_entropy(logits, labels, idx).loss;
}

}  // namespace

HGNNModel init_model(std::size_t input_dim, std::size_t hidden_dim, std::size_t n_classes, Rng& rng) {
  auto glorot = [&rng](std::size_t fan_in, std::size_t fan_out) {
    Matrix w(fan_in, fan_out);
    double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : w.values()) v = (2.0 * rng.uniform() - 1.0) * bound;
    return w;
  };
  HGNNModel m;
  m.layer1.weight = glorot(input_dim, hidden_dim);
  m.layer2.weight = glorot(hidden_dim, n_classes);
  return m;
}

void validate(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) fail(Errc::InvalidConfig, "learning rate must be positive");
  if (!(cfg.dropout_p >= 0.0 && cfg.dropout_p < 1.0)) fail(Errc::InvalidConfig, "dropout must lie in [0, 1)");
  if (cfg.hidden_dim == 0) fail(Errc::InvalidConfig, "hidden dimension must be positive");
  if (!(cfg.adam_beta1 >= 0.0 && cfg.adam_beta1 < 1.0) || !(cfg.adam_beta2 >= 0.0 && cfg.adam_beta2 < 1.0))
    fail(Errc::InvalidConfig, "Adam betas must lie in [0, 1)");
  if (!(cfg.adam_eps > 0.0)) fail(Errc::InvalidConfig, "Adam epsilon must be positive");
  if (!(cfg.weight_decay >= 0.0)) fail(Errc::InvalidConfig, "weight decay must be non-negative");
}

Matrix hyperconv_forward(const CsrMatrix& propagation, const Matrix& x, const LayerParams& layer) {
  check_rows(propagation, x);
  if (layer.weight.rows() != x.cols()) {
    fail(Errc::DimMismatch, "layer expects " + std::to_string(layer.weight.rows()) + " input channels, got " +
                                std::to_string(x.cols()));
  }
  if (layer.weight.cols() < x.cols()) return propagation.multiply(matmul(x, layer.weight));
  return matmul(propagation.multiply(x), layer.weight);
}

Matrix hyperconv_forward(const NormalizedOperator& theta_norm, const Matrix& x, const LayerParams& layer) {
  return hyperconv_forward(theta_norm.matrix(), x, layer);
}

ForwardResult model_forward_propagated(const HGNNModel& m, const CsrMatrix& propagation,
                                       std::shared_ptr<const Matrix> propagated_input, Mode mode,
                                       double dropout_p, Rng& rng) {
  check_model(m, propagated_input->cols());
  if (propagation.rows() != propagated_input->rows()) fail(Errc::DimMismatch, "propagated input rows");

  ForwardResult r;
  ForwardCache& c = r.cache;
  c.propagated_input = std::move(propagated_input);
  c.preactivation = matmul(*c.propagated_input, m.layer1.weight);
  c.hidden = c.preactivation;
  for (double& v : c.hidden.values()) v = v > 0.0 ? v : 0.0;

  if (mode == Mode::Train && dropout_p > 0.0) {
    const double keep_scale = 1.0 / (1.0 - dropout_p);
    c.dropout_scale = Matrix(c.hidden.rows(), c.hidden.cols());
    auto scale = c.dropout_scale.values();
    auto h = c.hidden.values();
    for (std::size_t i = 0; i < scale.size(); ++i) {
      scale[i] = rng.uniform() >= dropout_p ? keep_scale : 0.0;
      h[i] *= scale[i];
    }
  }
  c.propagated_hidden = propagation.multiply(c.hidden);
  r.logits = matmul(c.propagated_hidden, m.layer2.weight);
  c.revision = m.revision;
  c.valid = true;
  return r;
}

ForwardResult model_forward(const HGNNModel& m, const CsrMatrix& propagation, const Matrix& x, Mode mode,
                            double dropout_p, Rng& rng) {
  check_rows(propagation, x);
  check_model(m, x.cols());
  auto px = std::make_shared<const Matrix>(propagation.multiply(x));
  return model_forward_propagated(m, propagation, std::move(px), mode, dropout_p, rng);
}

ForwardResult model_forward(const HGNNModel& m, const NormalizedOperator& theta_norm, const Matrix& x,
                            Mode mode, double dropout_p, Rng& rng) {
  return model_forward(m, theta_norm.matrix(), x, mode, dropout_p, rng);
}

LossResult softmax_cross_entropy(const Matrix& logits, const LabelVector& labels,
                                 std::span<const std::size_t> mask) {
  if (mask.empty()) fail(Errc::EmptyMask, "cross-entropy over an empty index set");
  if (labels.size() != logits.rows()) fail(Errc::DimMismatch, "labels do not match logits rows");
  check_indices(mask, logits.rows(), "mask");

  LossResult r;
  r.probs = Matrix(logits.rows(), logits.cols());
  std::vector<double> log_norm(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    auto z = logits.row(i);
    double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - mx);
    log_norm[i] = mx + std::log(sum);
    auto p = r.probs.row(i);
    for (std::size_t k = 0; k < z.size(); ++k) p[k] = std::exp(z[k] - mx) / sum;
  }
  double total = 0.0;
  for (std::size_t i : mask) {
    int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= logits.cols())
      fail(Errc::IndexOutOfRange, "label " + std::to_string(y) + " at row " + std::to_string(i));
    total += log_norm[i] - logits(i, static_cast<std::size_t>(y));
  }
  r.loss = total / static_cast<double>(mask.size());
  return r;
}

Gradients backward(const HGNNModel& m, const CsrMatrix& propagation, const ForwardCache& cache,
                   const Matrix& probs, const LabelVector& labels, std::span<const std::size_t> mask) {
  if (!cache.valid || cache.revision != m.revision) {
    fail(Errc::StaleCache, "forward cache does not belong to the current parameters");
  }
  if (mask.empty()) fail(Errc::EmptyMask, "backward over an empty index set");
  const std::size_t n = probs.rows();
  if (cache.propagated_hidden.rows() != n || probs.cols() != m.n_classes() ||
      cache.propagated_input->cols() != m.input_dim() || cache.hidden.cols() != m.hidden_dim()) {
    fail(Errc::StaleCache, "forward cache shapes do not match the model");
  }
  check_indices(mask, n, "mask");

  Matrix dlogits(n, probs.cols());
  const double inv = 1.0 / static_cast<double>(mask.size());
  for (std::size_t i : mask) {
    auto d = dlogits.row(i);
    auto p = probs.row(i);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] += p[k] * inv;
    d[static_cast<std::size_t>(labels[i])] -= inv;
  }

  Gradients g;
  g.layer2 = matmul_tn(cache.propagated_hidden, dlogits);
  // propagation is symmetric, so Pᵀ = P.
  Matrix dhidden = propagation.multiply(matmul_nt(dlogits, m.layer2.weight));
  auto dh = dhidden.values();
  auto pre = cache.preactivation.values();
  const bool dropped = cache.dropout_scale.size() == dh.size();
  for (std::size_t i = 0; i < dh.size(); ++i) {
    double s = pre[i] > 0.0 ? 1.0 : 0.0;
    if (dropped) s *= cache.dropout_scale.values()[i];
    dh[i] *= s;
  }
  g.layer1 = matmul_tn(*cache.propagated_input, dhidden);
  return g;
}

Gradients backward(const HGNNModel& m, const NormalizedOperator& theta_norm, const ForwardCache& cache,
                   const Matrix& probs, const LabelVector& labels, std::span<const std::size_t> mask) {
  return backward(m, theta_norm.matrix(), cache, probs, labels, mask);
}

void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads, AdamState& state,
               const TrainConfig& cfg) {
  if (params.size() != grads.size()) fail(Errc::ShapeMismatch, "parameter/gradient count mismatch");
  if (state.first_moment.empty() && state.step_count == 0) {
    for (const Matrix* p : params) {
      state.first_moment.emplace_back(p->rows(), p->cols());
      state.second_moment.emplace_back(p->rows(), p->cols());
    }
  }
  if (state.first_moment.size() != params.size() || state.second_moment.size() != params.size())
    fail(Errc::ShapeMismatch, "optimizer state tracks a different parameter list");
  for (std::size_t t = 0; t < params.size(); ++t) {
    if (!params[t]->same_shape(grads[t]) || !params[t]->same_shape(state.first_moment[t]) ||
        !params[t]->same_shape(state.second_moment[t]))
      fail(Errc::ShapeMismatch, "parameter " + std::to_string(t) + " shape disagrees");
  }

  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(cfg.adam_beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.adam_beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto p = params[k]->values();
    auto g = grads[k].values();
    auto m1 = state.first_moment[k].values();
    auto m2 = state.second_moment[k].values();
    for (std::size_t i = 0; i < p.size(); ++i) {
      m1[i] = cfg.adam_beta1 * m1[i] + (1.0 - cfg.adam_beta1) * g[i];
      m2[i] = cfg.adam_beta2 * m2[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
      double mhat = m1[i] / bc1;
      double vhat = m2[i] / bc2;
      p[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
    }
  }
}

void adam_step(HGNNModel& m, const Gradients& grads, AdamState& state, const TrainConfig& cfg) {
  Matrix* params[] = {&m.layer1.weight, &m.layer2.weight};
  const Matrix gs[] = {grads.layer1, grads.layer2};
  adam_step(params, gs, state, cfg);
  ++m.revision;
}

TrainResult train_with_propagation(const CsrMatrix& propagation, const Matrix& x, const LabelVector& labels,
                                   const SplitSpec& split, const TrainConfig& cfg) {
  validate(cfg);
  const std::size_t n = x.rows();
  check_rows(propagation, x);
  if (propagation.rows() != n) fail(Errc::DimMismatch, "propagation matrix must be square");
  if (labels.size() != n) fail(Errc::DimMismatch, "label count does not match feature rows");
  check_indices(split.train, n, "train");
  check_indices(split.validation, n, "validation");
  check_indices(split.test, n, "test");
  {
    std::set<std::size_t> seen;
    for (const auto* part : {&split.train, &split.validation, &split.test})
      for (std::size_t i : *part)
        if (!seen.insert(i).second)
          fail(Errc::DisjointnessViolation, "vertex " + std::to_string(i) + " appears twice in the split");
  }
  if (split.train.empty()) fail(Errc::EmptyMask, "no training vertices");
  if (cfg.early_stop_patience > 0 && split.validation.empty())
    fail(Errc::InvalidConfig, "early stopping needs a validation set");

  int max_label = -1;
  for (int y : labels) {
    if (y < 0) fail(Errc::IndexOutOfRange, "negative label " + std::to_string(y));
    max_label = std::max(max_label, y);
  }
  const std::size_t n_classes = static_cast<std::size_t>(max_label + 1);

  TrainResult result;
  {
    std::vector<bool> has(n_classes, false);
    for (std::size_t i : split.train) has[static_cast<std::size_t>(labels[i])] = true;
    for (std::size_t c = 0; c < n_classes; ++c)
      if (!has[c]) result.warnings.push_back("class " + std::to_string(c) + " has no training vertex");
  }

  Rng rng(cfg.seed);
  HGNNModel model = init_model(x.cols(), cfg.hidden_dim, n_classes, rng);
  auto px = std::make_shared<const Matrix>(propagation.multiply(x));
  AdamState adam;

  HGNNModel best = model;
  double best_acc = -1.0;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    ForwardResult fwd = model_forward_propagated(model, propagation, px, Mode::Train, cfg.dropout_p, rng);
    LossResult loss = softmax_cross_entropy(fwd.logits, labels, split.train);
    Gradients grads = backward(model, propagation, fwd.cache, loss.probs, labels, split.train);
    if (cfg.weight_decay > 0.0) {
      grads.layer1 = grads.layer1 + cfg.weight_decay * model.layer1.weight;
      grads.layer2 = grads.layer2 + cfg.weight_decay * model.layer2.weight;
    }
    adam_step(model, grads, adam, cfg);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss.loss;
    if (!split.validation.empty()) {
      ForwardResult ev = model_forward_propagated(model, propagation, px, Mode::Eval, 0.0, rng);
      rec.val_loss = mean_loss_on(ev.logits, labels, split.validation);
      rec.val_acc = accuracy(ev.logits, labels, split.validation);
    }
    result.history.push_back(rec);

    if (cfg.early_stop_patience > 0) {
      if (*rec.val_acc > best_acc || (*rec.val_acc == best_acc && *rec.val_loss < best_loss)) {
        best = model;
        best_acc = *rec.val_acc;
        best_loss = *rec.val_loss;
        result.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= cfg.early_stop_patience) {
        break;
      }
    }
  }
  result.model = cfg.early_stop_patience > 0 && result.best_epoch > 0 ? best : model;
  return result;
}

TrainResult train(const Hypergraph& g, const Matrix& x, const LabelVector& labels, const SplitSpec& split,
                  const TrainConfig& cfg) {
  if (g.n_vertices() != x.rows()) {
    fail(Errc::DimMismatch, "hypergraph has " + std::to_string(g.n_vertices()) + " vertices, features have " +
                                std::to_string(x.rows()) + " rows");
  }
  return train_with_propagation(normalized_theta(g).matrix(), x, labels, split, cfg);
}

std::vector<int> argmax_rows(const Matrix& logits) {
  std::vector<int> out(logits.rows(), 0);
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    auto z = logits.row(i);
    // max_element returns the first maximum, i.e. the lowest class index.
    out[i] = static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
  }
  return out;
}

double accuracy(const Matrix& logits, const LabelVector& labels, std::span<const std::size_t> index_set) {
  if (index_set.empty()) fail(Errc::EmptyIndexSet, "accuracy over an empty index set");
  if (labels.size() != logits.rows()) fail(Errc::DimMismatch, "labels do not match logits rows");
  check_indices(index_set, logits.rows(), "evaluation");
  std::vector<int> pred = argmax_rows(logits);
  std::size_t correct = 0;
  for (std::size_t i : index_set) correct += pred[i] == labels[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(index_set.size());
}

double evaluate(const HGNNModel& m, const CsrMatrix& propagation, const Matrix& x, const LabelVector& labels,
                std::span<const std::size_t> index_set) {
  if (index_set.empty()) fail(Errc::EmptyIndexSet, "evaluate over an empty index set");
  Rng unused(0);
  ForwardResult r = model_forward(m, propagation, x, Mode::Eval, 0.0, unused);
  return accuracy(r.logits, labels, index_set);
}

double evaluate(const HGNNModel& m, const Hypergraph& g, const Matrix& x, const LabelVector& labels,
                std::span<const std::size_t> index_set) {
  return evaluate(m, normalized_theta(g).matrix(), x, labels, index_set);
}

CsrMatrix gcn_propagation(const Matrix& adj) {
  if (adj.rows() != adj.cols()) fail(Errc::NotSymmetric, "adjacency is not square");
  double scale = 0.0;
  for (double v : adj.values()) scale = std::max(scale, std::abs(v));
  if (asymmetry(adj) > 1e-12 * std::max(1.0, scale)) fail(Errc::NotSymmetric, "adjacency is not symmetric");
  const std::size_t n = adj.rows();
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (double v : adj.row(i)) d += v;
    if (d > 0.0) s[i] = 1.0 / std::sqrt(d);
  }
  Matrix norm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) norm(i, j) = adj(i, j) * (s[i] * s[j]);
  return CsrMatrix::from_dense(norm);
}

Matrix gcn_forward(const Matrix& adj, const Matrix& x, const LayerParams& layer) {
  CsrMatrix p = gcn_propagation(adj);
  return hyperconv_forward(p, x, layer);
}

}  // namespace hgnn
