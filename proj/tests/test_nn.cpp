#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hgnn/construction.hpp"
#include "hgnn/error.hpp"
#include "hgnn/nn.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace hgnn;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected hgnn::Error");
  return Errc::IoError;
}

double rel_err(double a, double b) {
  double den = std::max(std::abs(a), std::abs(b));
  return den < 1e-10 ? std::abs(a - b) : std::abs(a - b) / den;
}

struct Toy {
  Hypergraph g;
  Matrix x;
  LabelVector labels;
  std::vector<std::size_t> mask;
  HGNNModel model;
};

Toy random_toy(std::mt19937_64& rng) {
  Toy t;
  t.g = oracle::random_hypergraph(rng, {.max_vertices = 12, .max_edges = 10});
  const std::size_t n = t.g.n_vertices();
  const std::size_t cin = 1 + rng() % 5, hidden = 1 + rng() % 5, classes = 2 + rng() % 4;
  t.x = oracle::random_matrix(n, cin, rng);
  t.model.layer1.weight = oracle::random_matrix(cin, hidden, rng);
  t.model.layer2.weight = oracle::random_matrix(hidden, classes, rng);
  for (std::size_t i = 0; i < n; ++i) t.labels.push_back(static_cast<int>(rng() % classes));
  for (std::size_t i = 0; i < n; ++i)
    if (i == 0 || rng() % 2 == 0) t.mask.push_back(i);
  return t;
}

}  // namespace

TEST_CASE("hyperconv_forward examples") {
  Hypergraph self = build_hypergraph({{0}}, 1);
  Matrix x = Matrix::from_rows({{1.5, -2.0, 3.0}});
  CHECK(hyperconv_forward(normalized_theta(self), x, {Matrix::identity(3)}) == x);

  Hypergraph pair = build_hypergraph({{0, 1}}, 2);
  Matrix y = hyperconv_forward(normalized_theta(pair), Matrix::from_rows({{1}, {0}}), {Matrix::from_rows({{1}})});
  CHECK(max_abs_diff(y, Matrix::from_rows({{0.5}, {0.5}})) < 1e-15);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    Hypergraph g = oracle::random_hypergraph(rng);
    NormalizedOperator op = normalized_theta(g);
    std::size_t c = 1 + rng() % 4;
    Matrix xs = oracle::random_matrix(g.n_vertices(), c, rng);
    Matrix base = hyperconv_forward(op, xs, {Matrix::identity(c)});
    Matrix doubled = hyperconv_forward(op, xs, {2.0 * Matrix::identity(c)});
    CHECK(max_abs_diff(doubled, 2.0 * base) < 1e-15);
    Matrix w = oracle::random_matrix(c, 1 + rng() % 4, rng);
    Matrix dense = oracle::naive_mul(oracle::naive_mul(oracle::dense_theta(g), xs), w);
    CHECK(max_abs_diff(hyperconv_forward(op, xs, {w}), dense) < 1e-12);
  }
  CHECK(code_of([&] { hyperconv_forward(normalized_theta(pair), Matrix(3, 1), {Matrix::identity(1)}); }) ==
        Errc::DimMismatch);
  CHECK(code_of([&] { hyperconv_forward(normalized_theta(pair), Matrix(2, 2), {Matrix::identity(3)}); }) ==
        Errc::DimMismatch);
}

TEST_CASE("model_forward basics") {
  std::mt19937_64 rng(2);
  Toy t = random_toy(rng);
  NormalizedOperator op = normalized_theta(t.g);

  HGNNModel zero;
  zero.layer1.weight = Matrix(t.x.cols(), 3);
  zero.layer2.weight = Matrix(3, 2);
  Rng r(1);
  ForwardResult z = model_forward(zero, op, t.x, Mode::Eval, 0.5, r);
  for (double v : z.logits.values()) CHECK(v == 0.0);

  Rng r1(9), r2(9);
  ForwardResult train0 = model_forward(t.model, op, t.x, Mode::Train, 0.0, r1);
  ForwardResult eval = model_forward(t.model, op, t.x, Mode::Eval, 0.5, r2);
  CHECK(train0.logits == eval.logits);

  Matrix expected = oracle::dense_forward(oracle::dense_theta(t.g), t.x, t.model.layer1.weight, t.model.layer2.weight);
  CHECK(max_abs_diff(eval.logits, expected) < 1e-12);

  // First-layer preactivation is exactly one hyperedge convolution.
  Matrix one_layer = matmul(op.matrix().multiply(t.x), t.model.layer1.weight);
  CHECK(eval.cache.preactivation == one_layer);
  CHECK(max_abs_diff(eval.cache.preactivation, hyperconv_forward(op, t.x, t.model.layer1)) < 1e-12);
}

TEST_CASE("model_forward on a fixed 4-vertex hypergraph") {
  Hypergraph g = build_hypergraph({{0, 1, 2}, {2, 3}, {1, 3}}, 4, std::vector<double>{1.0, 2.0, 0.5});
  Matrix x = Matrix::from_rows({{1, 0}, {0, 1}, {1, 1}, {-1, 2}});
  HGNNModel m;
  m.layer1.weight = Matrix::from_rows({{0.3, -0.2, 0.5}, {0.1, 0.4, -0.6}});
  m.layer2.weight = Matrix::from_rows({{1.0, -1.0}, {0.5, 0.25}, {-0.3, 0.8}});
  Rng rng(0);
  ForwardResult r = model_forward(m, normalized_theta(g), x, Mode::Eval, 0.5, rng);
  Matrix expected = oracle::dense_forward(oracle::dense_theta(g), x, m.layer1.weight, m.layer2.weight);
  CHECK(max_abs_diff(r.logits, expected) < 1e-12);
}

TEST_CASE("model_forward is permutation equivariant") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    Toy toy = random_toy(rng);
    const std::size_t n = toy.g.n_vertices();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    // vertex v becomes perm[v]
    std::vector<std::vector<std::size_t>> edges;
    for (EdgeId e = 0; e < toy.g.n_edges(); ++e) {
      std::vector<std::size_t> vs;
      for (VertexId v : toy.g.edge(e)) vs.push_back(perm[v]);
      edges.push_back(vs);
    }
    Hypergraph pg(n, edges, std::vector<double>(toy.g.weights().begin(), toy.g.weights().end()));
    Matrix px(n, toy.x.cols());
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t c = 0; c < toy.x.cols(); ++c) px(perm[v], c) = toy.x(v, c);
    Rng r(0);
    Matrix l = model_forward(toy.model, normalized_theta(toy.g), toy.x, Mode::Eval, 0, r).logits;
    Matrix pl = model_forward(toy.model, normalized_theta(pg), px, Mode::Eval, 0, r).logits;
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t c = 0; c < l.cols(); ++c) CHECK(pl(perm[v], c) == doctest::Approx(l(v, c)).epsilon(1e-12));
  }
}

TEST_CASE("inverted dropout preserves the expected hidden activation") {
  Hypergraph g = build_hypergraph({{0, 1, 2}, {2, 3, 4, 5}, {0, 5}}, 6);
  std::mt19937_64 gen(5);
  Matrix x = oracle::random_matrix(6, 3, gen, 0.0, 1.0);
  HGNNModel m;
  m.layer1.weight = oracle::random_matrix(3, 4, gen, 0.1, 1.0);
  m.layer2.weight = oracle::random_matrix(4, 2, gen);
  NormalizedOperator op = normalized_theta(g);
  Rng rng(77);
  Matrix eval_hidden = model_forward(m, op, x, Mode::Eval, 0.5, rng).cache.hidden;
  Matrix sum(eval_hidden.rows(), eval_hidden.cols());
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) sum = sum + model_forward(m, op, x, Mode::Train, 0.5, rng).cache.hidden;
  Matrix mean = (1.0 / draws) * sum;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    num += std::pow(mean.values()[i] - eval_hidden.values()[i], 2);
    den += std::pow(eval_hidden.values()[i], 2);
  }
  CHECK(std::sqrt(num / den) < 0.02);
}

TEST_CASE("softmax_cross_entropy examples") {
  LossResult u = softmax_cross_entropy(Matrix(1, 4, 0.7), {0}, std::vector<std::size_t>{0});
  CHECK(u.loss == doctest::Approx(std::log(4.0)).epsilon(1e-14));

  LossResult big = softmax_cross_entropy(Matrix::from_rows({{1000, 0}}), {0}, std::vector<std::size_t>{0});
  CHECK(std::isfinite(big.loss));
  CHECK(big.loss == doctest::Approx(0.0));

  LossResult s = softmax_cross_entropy(Matrix::from_rows({{1, 2, 3}}), {2}, std::vector<std::size_t>{0});
  double oracle_loss = -std::log(std::exp(3.0) / (std::exp(1.0) + std::exp(2.0) + std::exp(3.0)));
  CHECK(s.loss == doctest::Approx(oracle_loss).epsilon(1e-14));
  CHECK(s.loss == doctest::Approx(0.40760596444).epsilon(1e-10));

  std::mt19937_64 rng(6);
  Matrix logits = oracle::random_matrix(10, 5, rng, -30, 30);
  LossResult r = softmax_cross_entropy(logits, LabelVector(10, 1), std::vector<std::size_t>{1, 3});
  for (std::size_t i = 0; i < 10; ++i) {
    double sum = 0;
    for (double p : r.probs.row(i)) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  CHECK(code_of([&] { softmax_cross_entropy(logits, LabelVector(10, 1), std::vector<std::size_t>{}); }) ==
        Errc::EmptyMask);
}

TEST_CASE("backward zero-gradient fixed point") {
  std::mt19937_64 rng(7);
  Toy t = random_toy(rng);
  NormalizedOperator op = normalized_theta(t.g);
  Rng r(0);
  ForwardResult f = model_forward(t.model, op, t.x, Mode::Eval, 0, r);
  Matrix onehot(f.logits.rows(), f.logits.cols());
  for (std::size_t i = 0; i < onehot.rows(); ++i) onehot(i, static_cast<std::size_t>(t.labels[i])) = 1.0;
  Gradients g = backward(t.model, op, f.cache, onehot, t.labels, t.mask);
  for (double v : g.layer1.values()) CHECK(v == 0.0);
  for (double v : g.layer2.values()) CHECK(v == 0.0);
}

TEST_CASE("backward matches central finite differences") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Toy t = random_toy(rng);
    NormalizedOperator op = normalized_theta(t.g);
    Matrix theta = oracle::dense_theta(t.g);
    Rng r(0);
    ForwardResult f = model_forward(t.model, op, t.x, Mode::Eval, 0, r);
    LossResult loss = softmax_cross_entropy(f.logits, t.labels, t.mask);
    Gradients g = backward(t.model, op, f.cache, loss.probs, t.labels, t.mask);

    auto objective = [&] {
      return oracle::masked_xent(oracle::dense_forward(theta, t.x, t.model.layer1.weight, t.model.layer2.weight),
                                 t.labels, t.mask);
    };
    Matrix fd1 = oracle::central_difference(t.model.layer1.weight, objective);
    Matrix fd2 = oracle::central_difference(t.model.layer2.weight, objective);
    for (std::size_t i = 0; i < fd1.size(); ++i) CHECK(rel_err(g.layer1.values()[i], fd1.values()[i]) < 1e-5);
    for (std::size_t i = 0; i < fd2.size(); ++i) CHECK(rel_err(g.layer2.values()[i], fd2.values()[i]) < 1e-5);
  }
}

TEST_CASE("backward through dropout matches finite differences with the mask frozen") {
  std::mt19937_64 rng(9);
  Toy t = random_toy(rng);
  NormalizedOperator op = normalized_theta(t.g);
  Rng r(3);
  ForwardResult f = model_forward(t.model, op, t.x, Mode::Train, 0.5, r);
  LossResult loss = softmax_cross_entropy(f.logits, t.labels, t.mask);
  Gradients g = backward(t.model, op, f.cache, loss.probs, t.labels, t.mask);
  Matrix theta = oracle::dense_theta(t.g);
  Matrix scale = f.cache.dropout_scale;
  auto objective = [&] {
    Matrix h = oracle::relu(oracle::naive_mul(oracle::naive_mul(theta, t.x), t.model.layer1.weight));
    for (std::size_t i = 0; i < h.size(); ++i) h.values()[i] *= scale.values()[i];
    return oracle::masked_xent(oracle::naive_mul(oracle::naive_mul(theta, h), t.model.layer2.weight), t.labels, t.mask);
  };
  Matrix fd1 = oracle::central_difference(t.model.layer1.weight, objective);
  Matrix fd2 = oracle::central_difference(t.model.layer2.weight, objective);
  for (std::size_t i = 0; i < fd1.size(); ++i) CHECK(rel_err(g.layer1.values()[i], fd1.values()[i]) < 1e-5);
  for (std::size_t i = 0; i < fd2.size(); ++i) CHECK(rel_err(g.layer2.values()[i], fd2.values()[i]) < 1e-5);
}

TEST_CASE("doubling features with a halved first layer doubles the first-layer gradient") {
  Hypergraph g = build_hypergraph({{0, 1}, {1, 2, 3}, {0, 3}}, 4);
  std::mt19937_64 rng(10);
  Matrix x = oracle::random_matrix(4, 3, rng, 0.1, 1.0);
  HGNNModel m;
  m.layer1.weight = oracle::random_matrix(3, 2, rng, 0.1, 1.0);  // positive preactivations
  m.layer2.weight = oracle::random_matrix(2, 3, rng);
  LabelVector labels{0, 1, 2, 1};
  std::vector<std::size_t> mask{0, 1, 2, 3};
  NormalizedOperator op = normalized_theta(g);

  auto grad_w1 = [&](const Matrix& feats, const HGNNModel& model) {
    Rng r(0);
    ForwardResult f = model_forward(model, op, feats, Mode::Eval, 0, r);
    for (double v : f.cache.preactivation.values()) REQUIRE(v > 0.0);
    LossResult l = softmax_cross_entropy(f.logits, labels, mask);
    return backward(model, op, f.cache, l.probs, labels, mask).layer1;
  };
  Matrix base = grad_w1(x, m);
  HGNNModel halved = m;
  halved.layer1.weight = 0.5 * m.layer1.weight;
  Matrix doubled = grad_w1(2.0 * x, halved);
  CHECK(max_abs_diff(doubled, 2.0 * base) < 1e-12);

  Matrix theta = oracle::dense_theta(g);
  Matrix x2 = 2.0 * x;
  auto objective = [&] {
    return oracle::masked_xent(oracle::dense_forward(theta, x2, halved.layer1.weight, halved.layer2.weight), labels, mask);
  };
  Matrix fd = oracle::central_difference(halved.layer1.weight, objective);
  for (std::size_t i = 0; i < fd.size(); ++i) CHECK(rel_err(doubled.values()[i], fd.values()[i]) < 1e-5);
}

TEST_CASE("backward rejects a stale cache") {
  std::mt19937_64 rng(11);
  Toy t = random_toy(rng);
  NormalizedOperator op = normalized_theta(t.g);
  Rng r(0);
  ForwardResult f = model_forward(t.model, op, t.x, Mode::Eval, 0, r);
  LossResult l = softmax_cross_entropy(f.logits, t.labels, t.mask);
  Gradients g = backward(t.model, op, f.cache, l.probs, t.labels, t.mask);
  AdamState state;
  adam_step(t.model, g, state, TrainConfig{});
  CHECK(code_of([&] { backward(t.model, op, f.cache, l.probs, t.labels, t.mask); }) == Errc::StaleCache);
  CHECK(code_of([&] { backward(t.model, op, ForwardCache{}, l.probs, t.labels, t.mask); }) == Errc::StaleCache);
}

TEST_CASE("adam_step") {
  TrainConfig cfg;
  SUBCASE("first step moves by about lr against the gradient sign") {
    Matrix p = Matrix::from_rows({{1.0, -2.0, 0.5}});
    Matrix g = Matrix::from_rows({{3.0, -0.25, 100.0}});
    AdamState s;
    Matrix* params[] = {&p};
    adam_step(params, std::span<const Matrix>(&g, 1), s, cfg);
    CHECK(p(0, 0) == doctest::Approx(1.0 - cfg.learning_rate).epsilon(1e-7));
    CHECK(p(0, 1) == doctest::Approx(-2.0 + cfg.learning_rate).epsilon(1e-7));
    CHECK(p(0, 2) == doctest::Approx(0.5 - cfg.learning_rate).epsilon(1e-7));
    CHECK(s.step_count == 1);
  }
  SUBCASE("zero gradient leaves parameters unchanged") {
    Matrix p = Matrix::from_rows({{1.0, -2.0}});
    Matrix before = p;
    Matrix g(1, 2);
    AdamState s;
    Matrix* params[] = {&p};
    adam_step(params, std::span<const Matrix>(&g, 1), s, cfg);
    CHECK(p == before);
    // moments decay after a nonzero step followed by a zero step
    Matrix g1 = Matrix::from_rows({{1.0, 1.0}});
    adam_step(params, std::span<const Matrix>(&g1, 1), s, cfg);
    double m_after = s.first_moment[0](0, 0);
    adam_step(params, std::span<const Matrix>(&g, 1), s, cfg);
    CHECK(s.first_moment[0](0, 0) == doctest::Approx(cfg.adam_beta1 * m_after));
  }
  SUBCASE("two constant-gradient steps match the scalar recurrence") {
    Matrix p = Matrix::from_rows({{0.3}});
    Matrix g = Matrix::from_rows({{0.2}});
    AdamState s;
    Matrix* params[] = {&p};
    adam_step(params, std::span<const Matrix>(&g, 1), s, cfg);
    adam_step(params, std::span<const Matrix>(&g, 1), s, cfg);
    double theta = 0.3, m = 0, v = 0;
    for (int t = 1; t <= 2; ++t) {
      m = 0.9 * m + 0.1 * 0.2;
      v = 0.999 * v + 0.001 * 0.04;
      double mh = m / (1 - std::pow(0.9, t)), vh = v / (1 - std::pow(0.999, t));
      theta -= 0.001 * mh / (std::sqrt(vh) + 1e-8);
    }
    CHECK(std::abs(p(0, 0) - theta) < 1e-12);
  }
  SUBCASE("shape disagreement") {
    Matrix p(2, 2), g(2, 3);
    AdamState s;
    Matrix* params[] = {&p};
    CHECK(code_of([&] { adam_step(params, std::span<const Matrix>(&g, 1), s, cfg); }) == Errc::ShapeMismatch);
  }
}

TEST_CASE("train separates two Gaussian clusters") {
  synthetic::Clusters c = synthetic::gaussian_clusters(30, 2, 8, 4.0, 2, 123);
  Hypergraph g = knn_hyperedges(c.x, 5);
  TrainConfig cfg;
  cfg.seed = 7;
  TrainResult r = train(g, c.x, c.labels, c.split, cfg);
  CHECK(r.history.size() == 200);
  CHECK(evaluate(r.model, g, c.x, c.labels, c.split.test) == 1.0);
  CHECK(r.history.back().train_loss < r.history.front().train_loss);
}

TEST_CASE("train edge cases") {
  synthetic::Clusters c = synthetic::gaussian_clusters(10, 2, 3, 4.0, 2, 5);
  c.split.validation = {c.split.test.back()};
  c.split.test.pop_back();
  Hypergraph g = knn_hyperedges(c.x, 3);
  TrainConfig cfg;
  cfg.seed = 3;

  SUBCASE("zero epochs returns the initial model") {
    cfg.epochs = 0;
    TrainResult r = train(g, c.x, c.labels, c.split, cfg);
    CHECK(r.history.empty());
    Rng rng(cfg.seed);
    HGNNModel init = init_model(c.x.cols(), cfg.hidden_dim, 2, rng);
    CHECK(r.model.layer1.weight == init.layer1.weight);
    CHECK(r.model.layer2.weight == init.layer2.weight);
  }
  SUBCASE("same seed gives bit-identical results") {
    cfg.epochs = 30;
    TrainResult a = train(g, c.x, c.labels, c.split, cfg);
    TrainResult b = train(g, c.x, c.labels, c.split, cfg);
    CHECK(a.model.layer1.weight == b.model.layer1.weight);
    CHECK(a.model.layer2.weight == b.model.layer2.weight);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
      CHECK(a.history[i].train_loss == b.history[i].train_loss);
      CHECK(a.history[i].val_loss == b.history[i].val_loss);
    }
  }
  SUBCASE("early stopping returns the best-validation model") {
    cfg.epochs = 100;
    cfg.early_stop_patience = 5;
    TrainResult r = train(g, c.x, c.labels, c.split, cfg);
    CHECK(r.best_epoch >= 1);
    CHECK(r.history.size() <= 100);
  }
  SUBCASE("overlapping split") {
    c.split.test.push_back(c.split.train.front());
    CHECK(code_of([&] { train(g, c.x, c.labels, c.split, cfg); }) == Errc::DisjointnessViolation);
  }
  SUBCASE("dimension mismatch") {
    Hypergraph small = build_hypergraph({{0, 1}}, 2);
    CHECK(code_of([&] { train(small, c.x, c.labels, c.split, cfg); }) == Errc::DimMismatch);
  }
  SUBCASE("missing class warns") {
    c.split.train = {0};
    TrainResult r = train(g, c.x, c.labels, c.split, cfg);
    CHECK(r.warnings.size() == 1);
  }
  SUBCASE("invalid config") {
    cfg.dropout_p = 1.0;
    CHECK(code_of([&] { train(g, c.x, c.labels, c.split, cfg); }) == Errc::InvalidConfig);
  }
}

TEST_CASE("accuracy and evaluate") {
  Matrix logits = Matrix::from_rows({{2, 1}, {0, 3}, {1, 1}});
  CHECK(accuracy(logits, {0, 1, 0}, std::vector<std::size_t>{0, 1, 2}) == 1.0);  // tie -> class 0
  CHECK(accuracy(logits, {1, 1, 0}, std::vector<std::size_t>{0}) == 0.0);

  Matrix ten(10, 2);
  LabelVector labels(10, 0);
  for (std::size_t i = 0; i < 3; ++i) labels[i] = 1;  // predicted 0 everywhere: 7 correct
  std::vector<std::size_t> all(10);
  std::iota(all.begin(), all.end(), 0);
  CHECK(accuracy(ten, labels, all) == doctest::Approx(0.7));
  CHECK(code_of([&] { accuracy(ten, labels, std::vector<std::size_t>{}); }) == Errc::EmptyIndexSet);

  HGNNModel perfect;
  perfect.layer1.weight = Matrix::from_rows({{1, 0}, {0, 1}});
  perfect.layer2.weight = Matrix::identity(2);
  Hypergraph g = build_hypergraph({{0}, {1}}, 2);
  Matrix x = Matrix::from_rows({{1, 0}, {0, 1}});
  CHECK(evaluate(perfect, g, x, {0, 1}, std::vector<std::size_t>{0, 1}) == 1.0);
}

TEST_CASE("gcn_forward") {
  std::mt19937_64 rng(12);
  Matrix x = oracle::random_matrix(3, 2, rng);
  Matrix w = oracle::random_matrix(2, 4, rng);
  CHECK(max_abs_diff(gcn_forward(Matrix::identity(3), x, {w}), oracle::naive_mul(x, w)) < 1e-15);

  // A = [[1,1],[1,1]] has row sums 2, so D^{-1/2} A D^{-1/2} = A / 2.
  Matrix y = gcn_forward(Matrix::from_rows({{1, 1}, {1, 1}}), Matrix::from_rows({{1}, {0}}), {Matrix::from_rows({{1}})});
  CHECK(max_abs_diff(y, Matrix::from_rows({{0.5}, {0.5}})) < 1e-15);

  CHECK(code_of([] { gcn_forward(Matrix::from_rows({{1, 1}, {0, 1}}), Matrix(2, 1), {Matrix(1, 1)}); }) ==
        Errc::NotSymmetric);
  CHECK(code_of([] { gcn_forward(Matrix::identity(2), Matrix(3, 1), {Matrix(1, 1)}); }) == Errc::DimMismatch);
}

TEST_CASE("2-uniform hyperedge convolution is the averaged graph propagation") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 10; ++t) {
    std::size_t n = 2 + rng() % 10;
    auto edges = oracle::random_graph(n, rng);
    std::vector<std::vector<std::size_t>> he;
    Matrix a(n, n);
    for (auto [u, v] : edges) {
      he.push_back({u, v});
      a(u, v) = a(v, u) = 1;
    }
    Matrix x = oracle::random_matrix(n, 3, rng);
    Matrix w = oracle::random_matrix(3, 2, rng);
    Matrix hyper = hyperconv_forward(normalized_theta(build_hypergraph(he, n)), x, {w});
    // ½ (I + D^{-1/2} A D^{-1/2}) X W
    Matrix graph_part = gcn_propagation(a).to_dense();
    Matrix expected = 0.5 * oracle::naive_mul(oracle::naive_mul(Matrix::identity(n) + graph_part, x), w);
    CHECK(max_abs_diff(hyper, expected) < 1e-12);
  }
}
