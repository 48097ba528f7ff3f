// Test-only reference implementations, deliberately independent of the
// library's algorithms: repeated-deletion peeling, exhaustive subset
// enumeration and truncated-series diffusion.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <set>
#include <vector>

#include "cogl/graph.hpp"
#include "cogl/rng.hpp"

namespace oracle {

/// Core numbers by literal repeated deletion: for each k, peel nodes of
/// degree < k to a fixed point; survivors have core >= k.
inline std::vector<int> naive_core_numbers(const cogl::Graph& g) {
  const int n = g.node_count;
  std::vector<int> core(n, 0);
  for (int k = 1; k <= n; ++k) {
    std::vector<char> alive(n, 1);
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<int> deg(n, 0);
      for (const auto& [u, v] : g.edges)
        if (alive[u] && alive[v]) {
          ++deg[u];
          ++deg[v];
        }
      for (int v = 0; v < n; ++v)
        if (alive[v] && deg[v] < k) {
          alive[v] = 0;
          changed = true;
        }
    }
    bool any = false;
    for (int v = 0; v < n; ++v)
      if (alive[v]) {
        core[v] = k;
        any = true;
      }
    if (!any) break;
  }
  return core;
}

/// Truss numbers by literal repeated deletion: for each k, peel edges in
/// fewer than k-2 triangles of the remaining subgraph; survivors have
/// truss >= k.
inline std::vector<int> naive_truss_numbers(const cogl::Graph& g) {
  const int m = g.edge_count();
  std::vector<int> truss(m, 2);
  auto support_of = [&](const std::vector<char>& alive, int e) {
    auto [u, v] = g.edges[e];
    int s = 0;
    // common neighbors reachable through alive edges only
    std::set<int> nu, nv;
    for (int i = 0; i < m; ++i) {
      if (!alive[i]) continue;
      auto [a, b] = g.edges[i];
      if (a == u) nu.insert(b);
      if (b == u) nu.insert(a);
      if (a == v) nv.insert(b);
      if (b == v) nv.insert(a);
    }
    for (int w : nu)
      if (nv.count(w)) ++s;
    return s;
  };
  for (int k = 2; k <= g.node_count + 2; ++k) {
    std::vector<char> alive(m, 1);
    bool changed = true;
    while (changed) {
      changed = false;
      for (int e = 0; e < m; ++e)
        if (alive[e] && support_of(alive, e) < k - 2) {
          alive[e] = 0;
          changed = true;
        }
    }
    bool any = false;
    for (int e = 0; e < m; ++e)
      if (alive[e]) {
        truss[e] = k;
        any = true;
      }
    if (!any) break;
  }
  return truss;
}

/// Per-node k-clique counts by enumerating every k-subset of nodes.
inline Eigen::MatrixXd brute_clique_counts(const cogl::Graph& g, const std::vector<int>& sizes) {
  const int n = g.node_count;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [u, v] : g.edges) adj[u][v] = adj[v][u] = 1;
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, static_cast<int>(sizes.size()));
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int k = sizes[si];
    if (k > n) continue;
    std::vector<int> pick(k);
    // iterate combinations
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      bool clique = true;
      for (int i = 0; i < k && clique; ++i)
        for (int j = i + 1; j < k && clique; ++j)
          if (!adj[pick[i]][pick[j]]) clique = false;
      if (clique)
        for (int i = 0; i < k; ++i) counts(pick[i], si) += 1.0;
      int at = k - 1;
      while (at >= 0 && pick[at] == n - k + at) --at;
      if (at < 0) break;
      ++pick[at];
      for (int i = at + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
    }
  }
  return counts;
}

/// Total number of k-cliques by the same subset enumeration.
inline long brute_clique_total(const cogl::Graph& g, int k) {
  auto counts = brute_clique_counts(g, {k});
  long total = 0;
  for (int v = 0; v < g.node_count; ++v) total += static_cast<long>(counts(v, 0));
  return total / k;
}

/// PPR diffusion by truncated Neumann series sum alpha*(1-alpha)^j T^j.
inline Eigen::MatrixXd series_diffusion(const cogl::Graph& g, double alpha, int terms = 400) {
  const int n = g.node_count;
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < g.edge_count(); ++i) {
    auto [u, v] = g.edges[i];
    a(u, v) += g.edge_weights[i];
    a(v, u) += g.edge_weights[i];
    degree[u] += g.edge_weights[i];
    degree[v] += g.edge_weights[i];
  }
  Eigen::VectorXd inv_sqrt = degree.array().rsqrt();
  Eigen::MatrixXd t = inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
  double coeff = alpha;
  for (int j = 0; j < terms; ++j) {
    total += coeff * power;
    power = power * t;
    coeff *= 1.0 - alpha;
  }
  return total;
}

/// Random simple graph: each pair independently with probability p.
inline cogl::Graph random_graph(int n, double p, std::uint64_t seed) {
  cogl::Graph g;
  g.node_count = n;
  cogl::RngStream stream(cogl::mix(seed, 0xBADu));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (stream.next_double() < p) g.edges.emplace_back(u, v);
  g.edge_weights.assign(g.edges.size(), 1.0);
  return g;
}

/// Random connected graph: a random spanning tree plus extra random edges.
inline cogl::Graph random_connected_graph(int n, double extra_p, std::uint64_t seed) {
  cogl::Graph g;
  g.node_count = n;
  cogl::RngStream stream(cogl::mix(seed, 0xC0Cu));
  std::set<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    int parent = static_cast<int>(stream.next_below(static_cast<std::uint64_t>(v)));
    edges.insert(std::minmax(parent, v));
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (stream.next_double() < extra_p) edges.insert({u, v});
  g.edges.assign(edges.begin(), edges.end());
  g.edge_weights.assign(g.edges.size(), 1.0);
  return g;
}

}  // namespace oracle
