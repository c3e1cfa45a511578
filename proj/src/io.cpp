#include "hgnn/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "hgnn/error.hpp"

namespace hgnn {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Line {
  std::size_t number;  // 1-based
  std::string_view text;
};

// Non-empty lines with any trailing '\r' removed.
std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back({number, line});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = s.find(sep, pos);
    if (end == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, end - pos));
    pos = end + 1;
  }
}

std::size_t parse_index(std::string_view tok, const std::string& source, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(source, line, "expected a non-negative integer, got '" + std::string(tok) + "'");
  }
  return v;
}

double parse_real(std::string_view tok, const std::string& source, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(source, line, "expected a number, got '" + std::string(tok) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(source, line, "non-finite value '" + std::string(tok) + "'");
  return v;
}

Matrix parse_features(std::string_view text, const std::string& source) {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (const Line& l : split_lines(text)) {
    auto toks = split(l.text, '\t');
    std::size_t id = parse_index(toks[0], source, l.number);
    if (id != rows) {
      throw ParseError(source, l.number, "expected node id " + std::to_string(rows) + ", got " + std::to_string(id));
    }
    if (toks.size() < 2) throw ParseError(source, l.number, "row has no feature values");
    if (rows == 0) cols = toks.size() - 1;
    if (toks.size() - 1 != cols) {
      throw ParseError(source, l.number, "expected " + std::to_string(cols) + " values, got " +
                                             std::to_string(toks.size() - 1));
    }
    for (std::size_t k = 1; k < toks.size(); ++k) data.push_back(parse_real(toks[k], source, l.number));
    ++rows;
  }
  if (rows == 0) throw ParseError(source, 1, "no feature rows");
  return Matrix(rows, cols, std::move(data));
}

std::vector<std::pair<std::size_t, std::string>> parse_label_rows(std::string_view text, const std::string& source) {
  std::vector<std::pair<std::size_t, std::string>> out;
  for (const Line& l : split_lines(text)) {
    auto toks = split(l.text, '\t');
    if (toks.size() != 2 || toks[1].empty()) throw ParseError(source, l.number, "expected node_id<TAB>class_name");
    std::size_t id = parse_index(toks[0], source, l.number);
    if (id != out.size()) {
      throw ParseError(source, l.number, "expected node id " + std::to_string(out.size()) + ", got " +
                                             std::to_string(id));
    }
    out.emplace_back(id, std::string(toks[1]));
  }
  return out;
}

EdgeList parse_edges(std::string_view text, const std::string& source, std::size_t n) {
  EdgeList edges;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Line& l : split_lines(text)) {
    auto toks = split(l.text, '\t');
    if (toks.size() != 2) throw ParseError(source, l.number, "expected u<TAB>v");
    std::size_t u = parse_index(toks[0], source, l.number);
    std::size_t v = parse_index(toks[1], source, l.number);
    if (u >= n || v >= n) throw ParseError(source, l.number, "vertex outside 0.." + std::to_string(n - 1));
    if (u == v) throw ParseError(source, l.number, "self loop");
    if (!seen.insert(std::minmax(u, v)).second) throw ParseError(source, l.number, "duplicate edge");
    edges.pairs.emplace_back(u, v);
  }
  return edges;
}

std::vector<std::size_t> split_part(const json& doc, const char* key, const std::string& source) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw ParseError(source, 1, std::string("missing array '") + key + "'");
  }
  std::vector<std::size_t> out;
  for (const auto& v : doc[key]) {
    if (!v.is_number_unsigned()) throw ParseError(source, 1, std::string("non-index entry in '") + key + "'");
    out.push_back(v.get<std::size_t>());
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    fail(Errc::SplitOverlap, std::string("repeated index in '") + key + "'");
  return out;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  } catch (const json::exception& e) {
    throw ParseError(source, 1, e.what());
  }
}

SplitSpec parse_split(std::string_view text, const std::string& source, std::size_t n) {
  json doc = parse_json(text, source);
  if (!doc.is_object()) throw ParseError(source, 1, "split must be a JSON object");
  SplitSpec split;
  split.train = split_part(doc, "train", source);
  split.validation = split_part(doc, "validation", source);
  split.test = split_part(doc, "test", source);
  std::set<std::size_t> seen;
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    for (std::size_t i : *part) {
      if (i >= n) fail(Errc::IndexOutOfRange, source + ": split index " + std::to_string(i) + " >= " + std::to_string(n));
      if (!seen.insert(i).second) fail(Errc::SplitOverlap, source + ": vertex " + std::to_string(i) + " in two sets");
    }
  }
  return split;
}

json matrix_json(const Matrix& m) {
  json data = json::array();
  for (double v : m.values()) data.push_back(v);
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j, const char* what) {
  std::size_t rows = j.at("rows").get<std::size_t>();
  std::size_t cols = j.at("cols").get<std::size_t>();
  const json& data = j.at("data");
  if (!data.is_array() || data.size() != rows * cols) {
    fail(Errc::ShapeMismatch, std::string(what) + " holds " + std::to_string(data.size()) + " values for " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
  }
  std::vector<double> vals;
  vals.reserve(data.size());
  for (const auto& v : data) vals.push_back(v.get<double>());
  return Matrix(rows, cols, std::move(vals));
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!fs::exists(path)) fail(Errc::MissingFile, path.string());
    fail(Errc::IoError, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

std::string format_hypergraph(const Hypergraph& g) {
  std::string out = "# n_vertices\t" + std::to_string(g.n_vertices()) + "\n";
  for (EdgeId e = 0; e < g.n_edges(); ++e) {
    out += std::to_string(e);
    out += '\t';
    out += format_double(g.weight(e));
    out += '\t';
    bool first = true;
    for (VertexId v : g.edge(e)) {
      if (!first) out += ',';
      out += std::to_string(v);
      first = false;
    }
    out += '\n';
  }
  return out;
}

Hypergraph parse_hypergraph(std::string_view text, const std::string& source, std::optional<std::size_t> n_vertices) {
  std::optional<std::size_t> header_n;
  std::vector<std::vector<VertexId>> edges;
  std::vector<double> weights;
  std::size_t max_vertex = 0;
  bool any_vertex = false;
  for (const Line& l : split_lines(text)) {
    if (l.text.front() == '#') {
      auto toks = split(l.text, '\t');
      if (toks.size() == 2 && toks[0] == "# n_vertices") header_n = parse_index(toks[1], source, l.number);
      continue;
    }
    auto toks = split(l.text, '\t');
    if (toks.size() != 3) throw ParseError(source, l.number, "expected edge_id<TAB>weight<TAB>vertices");
    std::size_t id = parse_index(toks[0], source, l.number);
    if (id != edges.size()) {
      throw ParseError(source, l.number, "expected edge id " + std::to_string(edges.size()) + ", got " +
                                             std::to_string(id));
    }
    double w = parse_real(toks[1], source, l.number);
    if (!(w > 0.0)) fail(Errc::NonPositiveWeight, source + ":" + std::to_string(l.number) + ": weight " + std::string(toks[1]));
    if (toks[2].empty()) fail(Errc::EmptyHyperedge, source + ":" + std::to_string(l.number) + ": hyperedge " + std::to_string(id));
    std::vector<VertexId> vs;
    for (std::string_view tok : split(toks[2], ',')) {
      std::size_t v = parse_index(tok, source, l.number);
      if (!vs.empty() && v <= vs.back()) {
        if (v == vs.back())
          fail(Errc::DuplicateVertexInEdge, source + ":" + std::to_string(l.number) + ": vertex " + std::to_string(v));
        throw ParseError(source, l.number, "vertex ids must be ascending");
      }
      vs.push_back(v);
      max_vertex = std::max(max_vertex, v);
      any_vertex = true;
    }
    edges.push_back(std::move(vs));
    weights.push_back(w);
  }
  std::size_t n = header_n ? *header_n : n_vertices ? *n_vertices : (any_vertex ? max_vertex + 1 : 0);
  if (header_n && n_vertices && *header_n != *n_vertices) {
    fail(Errc::InconsistentNodeCount, source + ": header declares " + std::to_string(*header_n) +
                                          " vertices, expected " + std::to_string(*n_vertices));
  }
  if (any_vertex && max_vertex >= n) {
    fail(Errc::IndexOutOfRange, source + ": vertex " + std::to_string(max_vertex) + " >= " + std::to_string(n));
  }
  return Hypergraph(n, edges, std::move(weights));
}

void save_hypergraph(const Hypergraph& g, const fs::path& path) { write_file(path, format_hypergraph(g)); }

Hypergraph load_hypergraph(const fs::path& path, std::optional<std::size_t> n_vertices) {
  return parse_hypergraph(read_file(path), path.string(), n_vertices);
}

Matrix load_features(const fs::path& path) { return parse_features(read_file(path), path.string()); }

EdgeList load_edges(const fs::path& path, std::optional<std::size_t> n_vertices) {
  std::string text = read_file(path);
  std::size_t n = 0;
  if (n_vertices) {
    n = *n_vertices;
  } else {
    for (const Line& l : split_lines(text))
      for (std::string_view tok : split(l.text, '\t')) n = std::max(n, parse_index(tok, path.string(), l.number) + 1);
  }
  return parse_edges(text, path.string(), n);
}

std::vector<double> load_signal(const fs::path& path) {
  std::string text = read_file(path);
  std::vector<double> f;
  for (const Line& l : split_lines(text)) f.push_back(parse_real(l.text, path.string(), l.number));
  return f;
}

DatasetBundle load_dataset(const fs::path& dir) {
  for (const char* name : {"features.tsv", "labels.tsv", "split.json"})
    if (!fs::exists(dir / name)) fail(Errc::MissingFile, (dir / name).string());
  const bool has_edges = fs::exists(dir / "edges.tsv");
  const bool has_hyper = fs::exists(dir / "hyperedges.tsv");
  if (!has_edges && !has_hyper) fail(Errc::MissingFile, (dir / "edges.tsv").string() + " or hyperedges.tsv");

  DatasetBundle b;
  b.features = parse_features(read_file(dir / "features.tsv"), (dir / "features.tsv").string());
  const std::size_t n = b.features.rows();

  auto label_rows = parse_label_rows(read_file(dir / "labels.tsv"), (dir / "labels.tsv").string());
  if (label_rows.size() != n) {
    fail(Errc::InconsistentNodeCount, "labels.tsv has " + std::to_string(label_rows.size()) +
                                          " rows, features.tsv has " + std::to_string(n));
  }
  std::set<std::string> names;
  for (const auto& [id, name] : label_rows) names.insert(name);
  b.class_names.assign(names.begin(), names.end());
  std::map<std::string, int> index;
  for (std::size_t c = 0; c < b.class_names.size(); ++c) index[b.class_names[c]] = static_cast<int>(c);
  b.labels.reserve(n);
  for (const auto& [id, name] : label_rows) b.labels.push_back(index.at(name));

  b.split = parse_split(read_file(dir / "split.json"), (dir / "split.json").string(), n);
  if (has_edges) b.edges = parse_edges(read_file(dir / "edges.tsv"), (dir / "edges.tsv").string(), n);
  if (has_hyper) {
    Hypergraph g = load_hypergraph(dir / "hyperedges.tsv", n);
    if (g.n_vertices() != n) {
      fail(Errc::InconsistentNodeCount, "hyperedges.tsv covers " + std::to_string(g.n_vertices()) +
                                            " vertices, features.tsv has " + std::to_string(n));
    }
    b.hypergraph = std::move(g);
  }
  return b;
}

void save_dataset(const DatasetBundle& b, const fs::path& dir) {
  fs::create_directories(dir);
  std::string feat;
  for (std::size_t i = 0; i < b.features.rows(); ++i) {
    feat += std::to_string(i);
    for (double v : b.features.row(i)) {
      feat += '\t';
      feat += format_double(v);
    }
    feat += '\n';
  }
  write_file(dir / "features.tsv", feat);

  std::string lab;
  for (std::size_t i = 0; i < b.labels.size(); ++i)
    lab += std::to_string(i) + "\t" + b.class_names.at(static_cast<std::size_t>(b.labels[i])) + "\n";
  write_file(dir / "labels.tsv", lab);

  json split{{"train", b.split.train}, {"validation", b.split.validation}, {"test", b.split.test}};
  write_file(dir / "split.json", split.dump() + "\n");

  if (b.edges) {
    std::string e;
    for (const auto& [u, v] : b.edges->pairs) e += std::to_string(u) + "\t" + std::to_string(v) + "\n";
    write_file(dir / "edges.tsv", e);
  }
  if (b.hypergraph) save_hypergraph(*b.hypergraph, dir / "hyperedges.tsv");
}

Hypergraph dataset_hypergraph(const DatasetBundle& b) {
  if (b.hypergraph) return *b.hypergraph;
  if (b.edges) return graph_neighborhood_hyperedges(*b.edges, b.n_vertices());
  fail(Errc::MissingFile, "dataset has neither edges nor hyperedges");
}

std::string checkpoint_to_json(const HGNNModel& m, const CheckpointMeta& meta) {
  const TrainConfig& c = meta.config;
  json doc;
  doc["format"] = "hgnn-checkpoint";
  doc["version"] = kCheckpointVersion;
  doc["config"] = json{{"learning_rate", c.learning_rate},
                       {"dropout_p", c.dropout_p},
                       {"hidden_dim", c.hidden_dim},
                       {"epochs", c.epochs},
                       {"seed", c.seed},
                       {"adam_beta1", c.adam_beta1},
                       {"adam_beta2", c.adam_beta2},
                       {"adam_eps", c.adam_eps},
                       {"early_stop_patience", c.early_stop_patience},
                       {"weight_decay", c.weight_decay}};
  doc["seed"] = c.seed;
  doc["init"] = "glorot_uniform";
  doc["classes"] = meta.class_names;
  doc["best_epoch"] = meta.best_epoch;
  doc["input_dim"] = m.input_dim();
  doc["hidden_dim"] = m.hidden_dim();
  doc["n_classes"] = m.n_classes();
  doc["layer1"] = matrix_json(m.layer1.weight);
  doc["layer2"] = matrix_json(m.layer2.weight);
  return doc.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(std::string_view text, const std::string& source) {
  json doc = parse_json(text, source);
  try {
    if (!doc.is_object() || doc.value("format", "") != "hgnn-checkpoint") {
      fail(Errc::VersionMismatch, source + ": not an hgnn checkpoint");
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != kCheckpointVersion) {
      fail(Errc::VersionMismatch, source + ": unsupported checkpoint version " +
                                      (doc.contains("version") ? doc["version"].dump() : "<missing>"));
    }
    Checkpoint ck;
    const json& c = doc.at("config");
    TrainConfig& cfg = ck.meta.config;
    cfg.learning_rate = c.at("learning_rate").get<double>();
    cfg.dropout_p = c.at("dropout_p").get<double>();
    cfg.hidden_dim = c.at("hidden_dim").get<std::size_t>();
    cfg.epochs = c.at("epochs").get<std::size_t>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    cfg.adam_beta1 = c.at("adam_beta1").get<double>();
    cfg.adam_beta2 = c.at("adam_beta2").get<double>();
    cfg.adam_eps = c.at("adam_eps").get<double>();
    cfg.early_stop_patience = c.at("early_stop_patience").get<std::size_t>();
    cfg.weight_decay = c.value("weight_decay", 0.0);
    ck.meta.class_names = doc.at("classes").get<std::vector<std::string>>();
    ck.meta.best_epoch = doc.value("best_epoch", std::size_t{0});
    ck.model.layer1.weight = matrix_from_json(doc.at("layer1"), "layer1");
    ck.model.layer2.weight = matrix_from_json(doc.at("layer2"), "layer2");

    const HGNNModel& m = ck.model;
    if (m.layer1.weight.cols() != m.layer2.weight.rows())
      fail(Errc::ShapeMismatch, source + ": layer1 output width differs from layer2 input");
    if (doc.at("input_dim").get<std::size_t>() != m.input_dim() ||
        doc.at("hidden_dim").get<std::size_t>() != m.hidden_dim() ||
        doc.at("n_classes").get<std::size_t>() != m.n_classes())
      fail(Errc::ShapeMismatch, source + ": declared dimensions disagree with weight arrays");
    if (ck.meta.class_names.size() != m.n_classes())
      fail(Errc::ShapeMismatch, source + ": class table size differs from output width");
    return ck;
  } catch (const json::exception& e) {
    throw ParseError(source, 1, e.what());
  }
}

void save_checkpoint(const HGNNModel& m, const CheckpointMeta& meta, const fs::path& path) {
  write_file(path, checkpoint_to_json(m, meta));
}

Checkpoint load_checkpoint(const fs::path& path) { return checkpoint_from_json(read_file(path), path.string()); }

void check_compatible(const Checkpoint& ckpt, const DatasetBundle& bundle) {
  if (ckpt.model.input_dim() != bundle.features.cols()) {
    fail(Errc::ShapeMismatch, "checkpoint expects " + std::to_string(ckpt.model.input_dim()) +
                                  " features, dataset has " + std::to_string(bundle.features.cols()));
  }
  if (ckpt.meta.class_names != bundle.class_names) {
    fail(Errc::ShapeMismatch, "checkpoint class table differs from the dataset's");
  }
}

}  // namespace hgnn
