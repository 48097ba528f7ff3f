#include "cogl/cohesion.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "cogl/error.hpp"

namespace cogl {

const char* to_string(CohesionProperty p) {
  return p == CohesionProperty::Core ? "core" : "truss";
}

CohesionProperty cohesion_property_from_string(const std::string& s) {
  if (s == "core") return CohesionProperty::Core;
  if (s == "truss") return CohesionProperty::Truss;
  throw ArgumentError("unknown cohesion property '" + s + "' (expected core|truss)");
}

CoreDecomposition core_numbers(const Graph& g) {
  const int n = g.node_count;
  CoreDecomposition out;
  out.core_number.assign(n, 0);
  if (n == 0) return out;

  auto adj = adjacency_lists(g);
  std::vector<int> deg(n);
  int max_deg = 0;
  for (int v = 0; v < n; ++v) {
    deg[v] = static_cast<int>(adj[v].size());
    max_deg = std::max(max_deg, deg[v]);
  }

  // Batagelj-Zaversnik bucket peeling over the degree-sorted vertex array.
  std::vector<int> bucket_start(max_deg + 2, 0);
  for (int v = 0; v < n; ++v) ++bucket_start[deg[v] + 1];
  std::partial_sum(bucket_start.begin(), bucket_start.end(), bucket_start.begin());
  std::vector<int> order(n), pos(n);
  {
    std::vector<int> cursor(bucket_start.begin(), bucket_start.end() - 1);
    for (int v = 0; v < n; ++v) {
      pos[v] = cursor[deg[v]]++;
      order[pos[v]] = v;
    }
  }

  for (int i = 0; i < n; ++i) {
    int v = order[i];
    out.core_number[v] = deg[v];
    for (int u : adj[v]) {
      if (deg[u] > deg[v]) {
        int du = deg[u];
        int head = bucket_start[du];
        int w = order[head];
        if (w != u) {
          std::swap(order[pos[u]], order[head]);
          std::swap(pos[u], pos[w]);
        }
        ++bucket_start[du];
        --deg[u];
      }
    }
  }
  out.k_max = *std::max_element(out.core_number.begin(), out.core_number.end());
  return out;
}

namespace {

int count_common(const std::vector<int>& a, const std::vector<int>& b) {
  int s = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (a[i] > b[j]) ++j;
    else { ++s; ++i; ++j; }
  }
  return s;
}

}  // namespace

TrussDecomposition truss_numbers(const Graph& g) {
  const int m = g.edge_count();
  if (m == 0) throw EmptyError("truss_numbers: graph has no edges");

  // Work over edges sorted lexicographically so minimum-support ties are
  // processed in ascending (u, v) order.
  std::vector<int> lex(m);
  std::iota(lex.begin(), lex.end(), 0);
  std::sort(lex.begin(), lex.end(), [&](int a, int b) { return g.edges[a] < g.edges[b]; });
  std::vector<int> rank(m);
  for (int i = 0; i < m; ++i) rank[lex[i]] = i;

  auto adj = adjacency_lists(g);
  std::unordered_map<long long, int> index;
  index.reserve(m * 2);
  for (int i = 0; i < m; ++i) {
    auto [u, v] = g.edges[lex[i]];
    index[static_cast<long long>(u) * g.node_count + v] = i;
  }
  auto edge_id = [&](int u, int v) {
    if (u > v) std::swap(u, v);
    return index.at(static_cast<long long>(u) * g.node_count + v);
  };

  std::vector<int> support(m);
  for (int i = 0; i < m; ++i) {
    auto [u, v] = g.edges[lex[i]];
    support[i] = count_common(adj[u], adj[v]);
  }

  const int max_support = *std::max_element(support.begin(), support.end());
  std::vector<std::set<int>> buckets(max_support + 1);
  for (int i = 0; i < m; ++i) buckets[support[i]].insert(i);

  std::vector<char> alive(m, 1);
  std::vector<int> truss_lex(m, 2);
  int k = 2;
  int lowest = 0;
  for (int removed = 0; removed < m; ++removed) {
    while (buckets[lowest].empty()) ++lowest;
    int e = *buckets[lowest].begin();
    buckets[lowest].erase(buckets[lowest].begin());
    k = std::max(k, support[e] + 2);
    truss_lex[e] = k;
    alive[e] = 0;

    auto [u, v] = g.edges[lex[e]];
    const auto& nu = adj[u];
    const auto& nv = adj[v];
    std::size_t a = 0, b = 0;
    while (a < nu.size() && b < nv.size()) {
      if (nu[a] < nv[b]) ++a;
      else if (nu[a] > nv[b]) ++b;
      else {
        int w = nu[a];
        int e1 = edge_id(u, w), e2 = edge_id(v, w);
        if (alive[e1] && alive[e2]) {
          for (int ex : {e1, e2}) {
            buckets[support[ex]].erase(ex);
            --support[ex];
            buckets[support[ex]].insert(ex);
            lowest = std::min(lowest, support[ex]);
          }
        }
        ++a;
        ++b;
      }
    }
  }

  TrussDecomposition out;
  out.truss_number.resize(m);
  for (int i = 0; i < m; ++i) out.truss_number[i] = truss_lex[rank[i]];
  out.k_max = *std::max_element(out.truss_number.begin(), out.truss_number.end());
  return out;
}

std::vector<int> cohesive_node_set(const Graph& g, CohesionProperty property, int k) {
  std::vector<int> nodes;
  if (property == CohesionProperty::Core) {
    if (k < 1) throw ArgumentError("cohesive_node_set: core order must be >= 1");
    auto dec = core_numbers(g);
    for (int v = 0; v < g.node_count; ++v)
      if (dec.core_number[v] >= k) nodes.push_back(v);
  } else {
    if (k < 2) throw ArgumentError("cohesive_node_set: truss order must be >= 2");
    if (g.edge_count() == 0) return nodes;
    auto dec = truss_numbers(g);
    std::vector<char> in_set(g.node_count, 0);
    for (int i = 0; i < g.edge_count(); ++i) {
      if (dec.truss_number[i] >= k) {
        in_set[g.edges[i].first] = 1;
        in_set[g.edges[i].second] = 1;
      }
    }
    for (int v = 0; v < g.node_count; ++v)
      if (in_set[v]) nodes.push_back(v);
  }
  return nodes;
}

Eigen::VectorXd cohesion_feature_vector(const Graph& g, int K,
                                        std::span<const CohesionProperty> properties) {
  if (K < 1) throw ArgumentError("cohesion_feature_vector: K must be >= 1");
  Eigen::VectorXd features(K * static_cast<int>(properties.size()));
  int at = 0;
  for (auto property : properties) {
    const int first = property == CohesionProperty::Core ? 1 : 2;
    for (int i = first; i < first + K; ++i)
      features[at++] = static_cast<double>(cohesive_node_set(g, property, i).size());
  }
  return features;
}

}  // namespace cogl
