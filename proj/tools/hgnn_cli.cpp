// hgnn: command-line front end for hypergraph construction, training and inspection.
//
// Exit codes: 0 success, 1 data/runtime error, 2 usage error.
// stdout carries only JSON; progress and summaries go to stderr.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hgnn/construction.hpp"
#include "hgnn/error.hpp"
#include "hgnn/hypergraph.hpp"
#include "hgnn/io.hpp"
#include "hgnn/nn.hpp"
#include "hgnn/parallel.hpp"
#include "hgnn/spectral.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BuildArgs {
  std::string method;
  std::size_t k = 10;
  std::string features;
  std::string edges;
  std::optional<std::size_t> n;
  std::string out;
};

struct ConcatArgs {
  std::vector<std::string> inputs;
  std::string out;
};

struct TrainArgs {
  std::string data;
  std::string checkpoint;
  std::string history;
  std::string hypergraph;
  hgnn::TrainConfig cfg;
};

struct EvalArgs {
  std::string data;
  std::string checkpoint;
  std::string hypergraph;
  std::string split = "test";
};

struct InspectArgs {
  std::string hypergraph;
  std::optional<std::size_t> n;
  std::string signal;
};

json config_json(const hgnn::TrainConfig& c) {
  return json{{"learning_rate", c.learning_rate},
              {"dropout_p", c.dropout_p},
              {"hidden_dim", c.hidden_dim},
              {"epochs", c.epochs},
              {"seed", c.seed},
              {"adam_beta1", c.adam_beta1},
              {"adam_beta2", c.adam_beta2},
              {"adam_eps", c.adam_eps},
              {"early_stop_patience", c.early_stop_patience},
              {"weight_decay", c.weight_decay}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void summarize(const hgnn::Hypergraph& g) {
  double mean = g.n_edges() == 0 ? 0.0 : static_cast<double>(g.nnz()) / static_cast<double>(g.n_edges());
  std::cerr << "hypergraph: n=" << g.n_vertices() << " e=" << g.n_edges() << " mean_edge_degree=" << mean << "\n";
}

hgnn::Hypergraph resolve_hypergraph(const hgnn::DatasetBundle& bundle, const std::string& override_path) {
  if (!override_path.empty()) return hgnn::load_hypergraph(override_path, bundle.n_vertices());
  return hgnn::dataset_hypergraph(bundle);
}

int run_build(const BuildArgs& a) {
  hgnn::Hypergraph g;
  if (a.method == "knn") {
    if (a.features.empty()) throw UsageError("--method knn requires --features");
    hgnn::Matrix x = hgnn::load_features(a.features);
    g = hgnn::knn_hyperedges(x, a.k);
  } else {
    if (a.edges.empty()) throw UsageError("--method graph requires --edges");
    std::optional<std::size_t> n = a.n;
    if (!n && !a.features.empty()) n = hgnn::load_features(a.features).rows();
    hgnn::EdgeList edges = hgnn::load_edges(a.edges, n);
    std::size_t count = n.value_or(0);
    if (!n)
      for (const auto& [u, v] : edges.pairs) count = std::max({count, u + 1, v + 1});
    g = hgnn::graph_neighborhood_hyperedges(edges, count);
  }
  hgnn::save_hypergraph(g, a.out);
  summarize(g);
  return 0;
}

int run_concat(const ConcatArgs& a) {
  std::vector<hgnn::Hypergraph> gs;
  for (const auto& p : a.inputs) gs.push_back(hgnn::load_hypergraph(p));
  hgnn::Hypergraph fused = hgnn::concat_modalities(gs);
  hgnn::save_hypergraph(fused, a.out);
  summarize(fused);
  return 0;
}

int run_train(TrainArgs a) {
  hgnn::validate(a.cfg);
  json cfg = config_json(a.cfg);
  std::cerr << "config: " << cfg.dump() << "\n";

  hgnn::DatasetBundle bundle = hgnn::load_dataset(a.data);
  hgnn::Hypergraph g = resolve_hypergraph(bundle, a.hypergraph);
  summarize(g);

  hgnn::TrainResult r = hgnn::train(g, bundle.features, bundle.labels, bundle.split, a.cfg);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";

  hgnn::CheckpointMeta meta{a.cfg, bundle.class_names, r.best_epoch};
  hgnn::save_checkpoint(r.model, meta, a.checkpoint);

  std::string history;
  for (const auto& rec : r.history) {
    json line{{"epoch", rec.epoch},
              {"train_loss", rec.train_loss},
              {"val_loss", optional_number(rec.val_loss)},
              {"val_acc", optional_number(rec.val_acc)}};
    history += line.dump() + "\n";
  }
  std::string history_path = a.history;
  if (history_path.empty()) history_path = fs::path(a.checkpoint).replace_extension(".history.jsonl").string();
  hgnn::write_file(history_path, history);

  hgnn::CsrMatrix theta = hgnn::normalized_theta(g).matrix();
  auto acc_on = [&](const std::vector<std::size_t>& idx) -> json {
    if (idx.empty()) return nullptr;
    return hgnn::evaluate(r.model, theta, bundle.features, bundle.labels, idx);
  };
  json out{{"config", cfg},
           {"epochs_run", r.history.size()},
           {"best_epoch", r.best_epoch},
           {"final_train_loss", r.history.empty() ? json(nullptr) : json(r.history.back().train_loss)},
           {"validation_accuracy", acc_on(bundle.split.validation)},
           {"test_accuracy", acc_on(bundle.split.test)},
           {"checkpoint", a.checkpoint},
           {"history", history_path}};
  std::cout << out.dump() << "\n";
  return 0;
}

int run_eval(const EvalArgs& a) {
  hgnn::DatasetBundle bundle = hgnn::load_dataset(a.data);
  hgnn::Checkpoint ck = hgnn::load_checkpoint(a.checkpoint);
  hgnn::check_compatible(ck, bundle);
  hgnn::Hypergraph g = resolve_hypergraph(bundle, a.hypergraph);
  const std::vector<std::size_t>& idx = a.split == "train"        ? bundle.split.train
                                        : a.split == "validation" ? bundle.split.validation
                                                                  : bundle.split.test;
  double acc = hgnn::evaluate(ck.model, g, bundle.features, bundle.labels, idx);
  std::cout << json{{"split", a.split}, {"accuracy", acc}, {"n", idx.size()}}.dump() << "\n";
  return 0;
}

int run_inspect(const InspectArgs& a) {
  hgnn::Hypergraph g = hgnn::load_hypergraph(a.hypergraph, a.n);
  hgnn::DegreeVectors deg = hgnn::compute_degrees(g);

  std::map<double, std::size_t> vhist;
  for (double d : deg.vertex) ++vhist[d];
  std::map<std::size_t, std::size_t> ehist;
  for (std::size_t d : deg.edge) ++ehist[d];
  json vh = json::object();
  for (const auto& [d, c] : vhist) vh[hgnn::format_double(d)] = c;
  json eh = json::object();
  for (const auto& [d, c] : ehist) eh[std::to_string(d)] = c;

  json out{{"n", g.n_vertices()},
           {"e", g.n_edges()},
           {"nnz", g.nnz()},
           {"isolated_vertices", vhist.count(0.0) ? vhist.at(0.0) : 0},
           {"vertex_degree_histogram", vh},
           {"edge_degree_histogram", eh}};

  if (g.n_vertices() <= hgnn::kMaxDenseEigen) {
    hgnn::Matrix delta = hgnn::laplacian(hgnn::normalized_theta(g));
    hgnn::SpectralDecomposition dec = hgnn::eigendecompose(delta);
    out["spectrum"] = json{{"min_eigenvalue", dec.values.empty() ? 0.0 : dec.values.front()},
                           {"max_eigenvalue", dec.values.empty() ? 0.0 : dec.values.back()}};
  } else {
    out["spectrum"] = nullptr;
    out["note"] = "TooLarge: eigen statistics need n <= " + std::to_string(hgnn::kMaxDenseEigen);
    std::cerr << "note: spectrum skipped, n=" << g.n_vertices() << " exceeds the dense limit\n";
  }
  if (!a.signal.empty()) {
    std::vector<double> f = hgnn::load_signal(a.signal);
    out["omega"] = hgnn::regularizer_omega(g, f);
  }
  std::cout << out.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypergraph neural network toolkit"};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads for row-parallel kernels")
      ->envname("HGNN_THREADS")
      ->check(CLI::Range(1u, 1024u));

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build-hypergraph", "Build hyperedges.tsv from features or a graph");
  build_cmd->add_option("--method", build.method, "knn or graph")
      ->required()
      ->check(CLI::IsMember({"knn", "graph"}));
  build_cmd->add_option("--k", build.k, "Nearest neighbours per hyperedge")->check(CLI::PositiveNumber);
  build_cmd->add_option("--features", build.features, "features.tsv (knn input, or vertex count for graph)");
  build_cmd->add_option("--edges", build.edges, "edges.tsv (graph input)");
  build_cmd->add_option("--n", build.n, "Vertex count for --method graph");
  build_cmd->add_option("--out", build.out, "Output hyperedges.tsv")->required();

  ConcatArgs concat;
  auto* concat_cmd = app.add_subcommand("concat", "Fuse hyperedge groups by incidence concatenation");
  concat_cmd->add_option("inputs", concat.inputs, "Two or more hyperedges.tsv files")->required()->expected(2, -1);
  concat_cmd->add_option("--out", concat.out, "Output hyperedges.tsv")->required();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train the two-layer classifier");
  train_cmd->add_option("--data", tr.data, "Dataset directory")->required();
  train_cmd->add_option("--checkpoint", tr.checkpoint, "Output checkpoint JSON")->required();
  train_cmd->add_option("--history", tr.history, "Output history JSONL (default: <checkpoint>.history.jsonl)");
  train_cmd->add_option("--hypergraph", tr.hypergraph, "Use this hyperedges.tsv instead of the dataset's");
  train_cmd->add_option("--epochs", tr.cfg.epochs, "Training epochs");
  train_cmd->add_option("--lr", tr.cfg.learning_rate, "Adam learning rate")->check(CLI::PositiveNumber);
  train_cmd->add_option("--dropout", tr.cfg.dropout_p, "Dropout probability in [0,1)");
  train_cmd->add_option("--hidden", tr.cfg.hidden_dim, "Hidden width")->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", tr.cfg.seed, "Random seed");
  train_cmd->add_option("--patience", tr.cfg.early_stop_patience, "Early-stopping patience (0 = off)");
  train_cmd->add_option("--weight-decay", tr.cfg.weight_decay, "L2 penalty")->check(CLI::NonNegativeNumber);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Accuracy of a checkpoint on a dataset split");
  eval_cmd->add_option("--data", ev.data, "Dataset directory")->required();
  eval_cmd->add_option("--checkpoint", ev.checkpoint, "Checkpoint JSON")->required();
  eval_cmd->add_option("--hypergraph", ev.hypergraph, "Use this hyperedges.tsv instead of the dataset's");
  eval_cmd->add_option("--split", ev.split, "train, validation or test")
      ->check(CLI::IsMember({"train", "validation", "test"}));

  InspectArgs ins;
  auto* inspect_cmd = app.add_subcommand("inspect", "Degree and spectrum statistics of a hypergraph");
  inspect_cmd->add_option("--hypergraph", ins.hypergraph, "hyperedges.tsv")->required();
  inspect_cmd->add_option("--n", ins.n, "Vertex count when the file has no header");
  inspect_cmd->add_option("--signal", ins.signal, "Signal file (one value per line) for the regularizer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  hgnn::set_num_threads(threads);
  try {
    if (*build_cmd) return run_build(build);
    if (*concat_cmd) return run_concat(concat);
    if (*train_cmd) return run_train(tr);
    if (*eval_cmd) return run_eval(ev);
    if (*inspect_cmd) return run_inspect(ins);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const hgnn::Error& e) {
    if (e.code() == hgnn::Errc::InvalidConfig) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 2;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
