#pragma once

#include "cogl/graph.hpp"

namespace fixtures {

inline cogl::Graph triangle() { return cogl::Graph(3, {{0, 1}, {0, 2}, {1, 2}}); }

inline cogl::Graph path3() { return cogl::Graph(3, {{0, 1}, {1, 2}}); }

inline cogl::Graph complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return cogl::Graph(n, std::move(edges));
}

inline cogl::Graph cycle(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return cogl::Graph(n, std::move(edges));
}

// Two triangles sharing node 2.
inline cogl::Graph bowtie() {
  return cogl::Graph(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}});
}

// Triangle 0-1-2 with pendant edge 0-3.
inline cogl::Graph triangle_pendant() {
  return cogl::Graph(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}});
}

// Two disjoint triangles: the classic 1-WL twin of the 6-cycle.
inline cogl::Graph two_triangles() {
  return cogl::Graph(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
}

inline cogl::Graph edgeless(int n) { return cogl::Graph(n, {}); }

}  // namespace fixtures
