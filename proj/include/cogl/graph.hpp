#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cogl {

/// Undirected simple graph. Edges are stored once as (u, v) with u < v;
/// edge_weights is aligned with edges. Instances are treated as immutable
/// after construction, so concurrent reads are safe.
struct Graph {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> edge_weights;
  std::optional<Eigen::MatrixXd> node_features;

  Graph() = default;
  Graph(int n, std::vector<std::pair<int, int>> e);
  Graph(int n, std::vector<std::pair<int, int>> e, std::vector<double> w);

  int edge_count() const { return static_cast<int>(edges.size()); }
};

/// Neighbor lists, sorted ascending per node.
std::vector<std::vector<int>> adjacency_lists(const Graph& g);

std::vector<int> degrees(const Graph& g);

/// Node feature matrix to feed an encoder: the stored features, or a single
/// constant-1 column when the graph carries none.
Eigen::MatrixXd effective_features(const Graph& g);

/// Returns one description per violated Graph invariant; empty means valid.
/// Diagnostic only, never throws.
std::vector<std::string> validate_graph(const Graph& g);

/// A node-induced subgraph together with its node mapping:
/// origin[new_index] = index of that node in the parent graph.
struct InducedView {
  Graph graph;
  std::vector<int> origin;
};

/// Subgraph induced by `nodes` (any order, duplicates ignored). Kept nodes
/// are re-indexed in ascending original order; weights and feature rows are
/// carried over. Throws ArgumentError on out-of-range nodes.
InducedView induced_subgraph(const Graph& g, const std::vector<int>& nodes);

struct GraphDataset {
  std::string name;
  std::vector<Graph> graphs;
  std::vector<int> labels;  // dense, in [0, class_count)
  int class_count = 0;
  std::vector<long long> label_values;  // original label for each dense id

  int size() const { return static_cast<int>(graphs.size()); }
};

enum class FeatureKind { Constant, DegreeOneHot };

/// Replaces every graph's features with degree one-hot vectors, dimensioned
/// by the largest degree in the dataset.
GraphDataset with_degree_features(GraphDataset ds);

}  // namespace cogl
