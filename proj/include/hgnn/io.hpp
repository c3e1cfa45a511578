#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hgnn/construction.hpp"
#include "hgnn/hypergraph.hpp"
#include "hgnn/matrix.hpp"
#include "hgnn/nn.hpp"

namespace hgnn {

/// Dataset directory contents:
///   features.tsv    node_id<TAB>v1<TAB>v2...   (ids 0..n-1, ascending)
///   labels.tsv      node_id<TAB>class_name     (ids 0..n-1, ascending)
///   split.json      {"train":[..],"validation":[..],"test":[..]}
///   edges.tsv       u<TAB>v                    (optional, undirected, no duplicates)
///   hyperedges.tsv  edge_id<TAB>weight<TAB>v1,v2,...  (optional)
/// At least one of edges.tsv / hyperedges.tsv must exist.
struct DatasetBundle {
  Matrix features;
  LabelVector labels;
  std::vector<std::string> class_names;  // index = class id, sorted by name
  std::optional<EdgeList> edges;
  std::optional<Hypergraph> hypergraph;
  SplitSpec split;

  std::size_t n_vertices() const noexcept { return features.rows(); }
};

/// Throws MissingFile, ParseError (with line), InconsistentNodeCount,
/// SplitOverlap, IndexOutOfRange, or hypergraph validation errors.
DatasetBundle load_dataset(const std::filesystem::path& dir);

/// Writes the bundle in the layout load_dataset reads.
void save_dataset(const DatasetBundle& bundle, const std::filesystem::path& dir);

/// The bundle's hyperedges.tsv when present, otherwise neighbourhood hyperedges
/// built from edges.tsv.
Hypergraph dataset_hypergraph(const DatasetBundle& bundle);

/// Canonical text: a "# n_vertices<TAB>N" header, then one line per hyperedge.
/// Weights use the shortest decimal that round-trips.
std::string format_hypergraph(const Hypergraph& g);
/// Parses the canonical text. Without the header, n_vertices comes from the
/// argument or else from the largest referenced vertex + 1.
Hypergraph parse_hypergraph(std::string_view text, const std::string& source,
                            std::optional<std::size_t> n_vertices = std::nullopt);

void save_hypergraph(const Hypergraph& g, const std::filesystem::path& path);
Hypergraph load_hypergraph(const std::filesystem::path& path,
                           std::optional<std::size_t> n_vertices = std::nullopt);

/// features.tsv layout.
Matrix load_features(const std::filesystem::path& path);
/// edges.tsv layout. Without n_vertices the largest referenced vertex + 1 is used.
EdgeList load_edges(const std::filesystem::path& path, std::optional<std::size_t> n_vertices = std::nullopt);

/// One real value per line.
std::vector<double> load_signal(const std::filesystem::path& path);

inline constexpr int kCheckpointVersion = 1;

struct CheckpointMeta {
  TrainConfig config;
  std::vector<std::string> class_names;
  std::size_t best_epoch = 0;
};

struct Checkpoint {
  HGNNModel model;
  CheckpointMeta meta;
};

std::string checkpoint_to_json(const HGNNModel& m, const CheckpointMeta& meta);
/// Throws ParseError, VersionMismatch, ShapeMismatch.
Checkpoint checkpoint_from_json(std::string_view text, const std::string& source = "<checkpoint>");

void save_checkpoint(const HGNNModel& m, const CheckpointMeta& meta, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Throws ShapeMismatch when the model cannot run on the dataset.
void check_compatible(const Checkpoint& ckpt, const DatasetBundle& bundle);

/// Shortest round-trip decimal for a double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace hgnn
