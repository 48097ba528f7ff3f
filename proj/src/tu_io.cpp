#include "cogl/tu_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cogl/error.hpp"

namespace cogl {

namespace {

long long parse_integer(const std::string& token, const std::string& context) {
  std::size_t begin = token.find_first_not_of(" \t\r");
  std::size_t end = token.find_last_not_of(" \t\r");
  if (begin == std::string::npos) throw ParseError(context + ": empty token");
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data() + begin, token.data() + end + 1, value);
  if (ec != std::errc() || ptr != token.data() + end + 1)
    throw ParseError(context + ": non-integer token '" + token + "'");
  return value;
}

std::vector<long long> read_integer_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("missing file: " + file.string());
  std::vector<long long> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    values.push_back(parse_integer(line, file.filename().string()));
  }
  return values;
}

std::vector<std::pair<long long, long long>> read_edge_pairs(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("missing file: " + file.string());
  std::vector<std::pair<long long, long long>> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw FormatError(file.filename().string() + ": expected 'u, v' but got '" + line + "'");
    long long u = parse_integer(line.substr(0, comma), file.filename().string());
    long long v = parse_integer(line.substr(comma + 1), file.filename().string());
    pairs.emplace_back(u, v);
  }
  return pairs;
}

}  // namespace

GraphDataset load_tu_dataset(const std::filesystem::path& directory, const std::string& name) {
  const auto prefix = directory / name;
  auto indicator = read_integer_lines(prefix.string() + "_graph_indicator.txt");
  auto graph_labels = read_integer_lines(prefix.string() + "_graph_labels.txt");
  auto edge_pairs = read_edge_pairs(prefix.string() + "_A.txt");

  const long long node_total = static_cast<long long>(indicator.size());
  const int graph_count = static_cast<int>(graph_labels.size());

  // Map global 1-based node ids to (graph, local index).
  std::vector<int> node_graph(node_total), node_local(node_total);
  std::vector<int> graph_size(graph_count, 0);
  for (long long i = 0; i < node_total; ++i) {
    long long gid = indicator[i];
    if (gid < 1 || gid > graph_count)
      throw FormatError(name + ": graph indicator " + std::to_string(gid) + " out of range");
    node_graph[i] = static_cast<int>(gid - 1);
    node_local[i] = graph_size[gid - 1]++;
  }

  GraphDataset ds;
  ds.name = name;
  ds.graphs.resize(graph_count);
  for (int gi = 0; gi < graph_count; ++gi) ds.graphs[gi].node_count = graph_size[gi];

  // Deduplicate undirected edges; TU dumps may list each edge once or twice.
  std::vector<std::set<std::pair<int, int>>> edge_sets(graph_count);
  for (auto [a, b] : edge_pairs) {
    if (a < 1 || a > node_total || b < 1 || b > node_total)
      throw FormatError(name + ": edge endpoint " + std::to_string(a) + "," + std::to_string(b) +
                        " not in indicator range");
    if (a == b) throw FormatError(name + ": self-loop at node " + std::to_string(a));
    int ga = node_graph[a - 1], gb = node_graph[b - 1];
    if (ga != gb)
      throw FormatError(name + ": edge (" + std::to_string(a) + "," + std::to_string(b) +
                        ") crosses graphs " + std::to_string(ga + 1) + " and " +
                        std::to_string(gb + 1));
    int u = node_local[a - 1], v = node_local[b - 1];
    edge_sets[ga].insert(std::minmax(u, v));
  }
  for (int gi = 0; gi < graph_count; ++gi) {
    auto& g = ds.graphs[gi];
    g.edges.assign(edge_sets[gi].begin(), edge_sets[gi].end());
    g.edge_weights.assign(g.edges.size(), 1.0);
  }

  // Dense class labels in sorted original order; mapping kept on the dataset.
  {
    std::set<long long> distinct(graph_labels.begin(), graph_labels.end());
    ds.label_values.assign(distinct.begin(), distinct.end());
    ds.class_count = static_cast<int>(ds.label_values.size());
    std::map<long long, int> to_dense;
    for (int i = 0; i < ds.class_count; ++i) to_dense[ds.label_values[i]] = i;
    ds.labels.reserve(graph_count);
    for (long long raw : graph_labels) ds.labels.push_back(to_dense[raw]);
  }

  // Node features: one-hot node labels if the file exists, constant 1.0 otherwise.
  const std::filesystem::path node_label_file = prefix.string() + "_node_labels.txt";
  if (std::filesystem::exists(node_label_file)) {
    auto node_labels = read_integer_lines(node_label_file);
    if (static_cast<long long>(node_labels.size()) != node_total)
      throw FormatError(name + ": node label count " + std::to_string(node_labels.size()) +
                        " != node count " + std::to_string(node_total));
    std::set<long long> distinct(node_labels.begin(), node_labels.end());
    std::map<long long, int> to_col;
    int dim = 0;
    for (long long value : distinct) to_col[value] = dim++;
    for (int gi = 0; gi < graph_count; ++gi)
      ds.graphs[gi].node_features = Eigen::MatrixXd::Zero(graph_size[gi], dim);
    for (long long i = 0; i < node_total; ++i)
      (*ds.graphs[node_graph[i]].node_features)(node_local[i], to_col[node_labels[i]]) = 1.0;
  } else {
    for (auto& g : ds.graphs) g.node_features = Eigen::MatrixXd::Ones(g.node_count, 1);
  }
  return ds;
}

void save_tu_dataset(const GraphDataset& ds, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  const auto prefix = directory / ds.name;
  std::ofstream a(prefix.string() + "_A.txt");
  std::ofstream ind(prefix.string() + "_graph_indicator.txt");
  std::ofstream lab(prefix.string() + "_graph_labels.txt");
  if (!a || !ind || !lab) throw IoError("cannot write TU files under " + directory.string());

  long long base = 1;
  for (int gi = 0; gi < ds.size(); ++gi) {
    const auto& g = ds.graphs[gi];
    for (const auto& [u, v] : g.edges) {
      a << base + u << ", " << base + v << "\n";
      a << base + v << ", " << base + u << "\n";
    }
    for (int i = 0; i < g.node_count; ++i) ind << gi + 1 << "\n";
    lab << ds.label_values[ds.labels[gi]] << "\n";
    base += g.node_count;
  }
}

Graph read_graph_text(std::istream& in) {
  int n = 0;
  long long m = 0;
  if (!(in >> n >> m)) throw ParseError("graph text: expected 'n m' header");
  Graph g;
  g.node_count = n;
  std::string rest;
  std::getline(in, rest);
  for (long long i = 0; i < m; ++i) {
    std::string line;
    do {
      if (!std::getline(in, line)) throw ParseError("graph text: expected " + std::to_string(m) +
                                                    " edges, got " + std::to_string(i));
    } while (line.find_first_not_of(" \t\r") == std::string::npos);
    std::istringstream row(line);
    int u = 0, v = 0;
    double w = 1.0;
    if (!(row >> u >> v)) throw ParseError("graph text: bad edge line '" + line + "'");
    row >> w;
    g.edges.emplace_back(std::minmax(u, v));
    g.edge_weights.push_back(w);
  }
  return g;
}

Graph read_graph_text_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  return read_graph_text(in);
}

void write_graph_text(const Graph& g, std::ostream& out) {
  out << g.node_count << " " << g.edge_count() << "\n";
  char buf[64];
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", g.edge_weights[i]);
    out << g.edges[i].first << " " << g.edges[i].second << " " << buf << "\n";
  }
}

void write_graph_text_file(const Graph& g, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  write_graph_text(g, out);
}

}  // namespace cogl
