#include "cogl/graph.hpp"

#include <algorithm>
#include <set>

#include "cogl/error.hpp"

namespace cogl {

Graph::Graph(int n, std::vector<std::pair<int, int>> e) : node_count(n), edges(std::move(e)) {
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
  }
  edge_weights.assign(edges.size(), 1.0);
}

Graph::Graph(int n, std::vector<std::pair<int, int>> e, std::vector<double> w)
    : node_count(n), edges(std::move(e)), edge_weights(std::move(w)) {
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
  }
}

std::vector<std::vector<int>> adjacency_lists(const Graph& g) {
  std::vector<std::vector<int>> adj(g.node_count);
  for (const auto& [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

std::vector<int> degrees(const Graph& g) {
  std::vector<int> deg(g.node_count, 0);
  for (const auto& [u, v] : g.edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

Eigen::MatrixXd effective_features(const Graph& g) {
  if (g.node_features) return *g.node_features;
  return Eigen::MatrixXd::Ones(g.node_count, 1);
}

std::vector<std::string> validate_graph(const Graph& g) {
  std::vector<std::string> violations;
  if (g.node_count < 0) violations.push_back("negative node count");
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    auto [u, v] = g.edges[i];
    if (u == v) {
      violations.push_back("self-loop at " + std::to_string(u));
      continue;
    }
    if (u < 0 || v < 0 || u >= g.node_count || v >= g.node_count) {
      violations.push_back("endpoint out of range: (" + std::to_string(u) + "," +
                           std::to_string(v) + ")");
      continue;
    }
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second)
      violations.push_back("duplicate edge (" + std::to_string(key.first) + "," +
                           std::to_string(key.second) + ")");
  }
  if (g.edge_weights.size() != g.edges.size())
    violations.push_back("edge_weights length " + std::to_string(g.edge_weights.size()) +
                         " != edge count " + std::to_string(g.edges.size()));
  for (std::size_t i = 0; i < g.edge_weights.size(); ++i) {
    if (!(g.edge_weights[i] >= 0.0)) {
      violations.push_back("negative or NaN weight at edge " + std::to_string(i));
      break;
    }
  }
  if (g.node_features && g.node_features->rows() != g.node_count)
    violations.push_back("feature rows " + std::to_string(g.node_features->rows()) +
                         " != node count " + std::to_string(g.node_count));
  return violations;
}

InducedView induced_subgraph(const Graph& g, const std::vector<int>& nodes) {
  std::vector<char> keep(g.node_count, 0);
  for (int v : nodes) {
    if (v < 0 || v >= g.node_count)
      throw ArgumentError("induced_subgraph: node " + std::to_string(v) + " out of range");
    keep[v] = 1;
  }

  InducedView out;
  std::vector<int> new_index(g.node_count, -1);
  for (int v = 0; v < g.node_count; ++v) {
    if (keep[v]) {
      new_index[v] = static_cast<int>(out.origin.size());
      out.origin.push_back(v);
    }
  }
  out.graph.node_count = static_cast<int>(out.origin.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    auto [u, v] = g.edges[i];
    if (keep[u] && keep[v]) {
      out.graph.edges.emplace_back(new_index[u], new_index[v]);
      out.graph.edge_weights.push_back(g.edge_weights[i]);
    }
  }
  if (g.node_features) {
    Eigen::MatrixXd feats(out.graph.node_count, g.node_features->cols());
    for (int i = 0; i < out.graph.node_count; ++i) feats.row(i) = g.node_features->row(out.origin[i]);
    out.graph.node_features = std::move(feats);
  }
  return out;
}

GraphDataset with_degree_features(GraphDataset ds) {
  int max_degree = 0;
  for (const auto& g : ds.graphs)
    for (int d : degrees(g)) max_degree = std::max(max_degree, d);
  for (auto& g : ds.graphs) {
    Eigen::MatrixXd feats = Eigen::MatrixXd::Zero(g.node_count, max_degree + 1);
    auto deg = degrees(g);
    for (int v = 0; v < g.node_count; ++v) feats(v, deg[v]) = 1.0;
    g.node_features = std::move(feats);
  }
  return ds;
}

}  // namespace cogl
