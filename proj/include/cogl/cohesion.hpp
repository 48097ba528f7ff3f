#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "cogl/graph.hpp"

namespace cogl {

enum class CohesionProperty { Core, Truss };

const char* to_string(CohesionProperty p);
CohesionProperty cohesion_property_from_string(const std::string& s);

struct CoreDecomposition {
  std::vector<int> core_number;  // per node
  int k_max = 0;                  // 0 for edgeless graphs
};

struct TrussDecomposition {
  std::vector<int> truss_number;  // aligned with Graph::edges, each >= 2
  int k_max = 2;
};

/// Exact core numbers by linear-time bucket peeling.
CoreDecomposition core_numbers(const Graph& g);

/// Exact truss numbers by iterative support peeling. Throws EmptyError on
/// edgeless graphs. Minimum-support ties are processed in ascending (u, v)
/// order.
TrussDecomposition truss_numbers(const Graph& g);

/// Nodes of the k-cohesive subgraph, sorted ascending. For Core this is
/// {v : core(v) >= k} (k >= 1); for Truss, all endpoints of edges with
/// truss >= k (k >= 2). Empty when k exceeds k_max or the graph has no
/// edges.
std::vector<int> cohesive_node_set(const Graph& g, CohesionProperty property, int k);

/// Node counts of the i-cohesive subgraphs, concatenated per property in
/// the order given (i = 1..K for core, 2..K+1 for truss; K entries each).
Eigen::VectorXd cohesion_feature_vector(const Graph& g, int K,
                                        std::span<const CohesionProperty> properties);

}  // namespace cogl
