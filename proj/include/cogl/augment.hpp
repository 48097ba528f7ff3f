#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "cogl/cohesion.hpp"
#include "cogl/graph.hpp"

namespace cogl {

enum class WeightMode { Probabilistic, Deterministic };

/// Per-node importance from membership counts over a range of cohesive
/// subgraphs. Probabilistic mode is max-normalized to [0, 1]; deterministic
/// mode holds raw counts with the graph mean in `normalizer`.
struct ImportanceWeights {
  WeightMode mode = WeightMode::Probabilistic;
  Eigen::VectorXd values;
  double normalizer = 0.0;
};

enum class DecayKind { Linear, Sqrt, Square };

const char* to_string(DecayKind f);
DecayKind decay_kind_from_string(const std::string& s);

/// Refined dropping probabilities. Every node probability lies in
/// [(1-epsilon)*base_p_dr, base_p_dr]; each edge probability is the exact
/// mean of its endpoints'.
struct DropPlan {
  Eigen::VectorXd node_drop_prob;
  Eigen::VectorXd edge_drop_prob;
  double base_p_dr = 0.2;
  double epsilon = 0.2;
  DecayKind f_kind = DecayKind::Square;
};

/// Membership counts over the near-main cohesive subgraphs
/// (k in [max(k_max-2, floor), k_max]), max-normalized. All-zero for
/// edgeless graphs.
ImportanceWeights vertex_importance_prob(const Graph& g, CohesionProperty property);

/// Membership counts over every cohesive order (k in [floor, k_max]),
/// returned raw with the graph mean recorded.
ImportanceWeights vertex_importance_det(const Graph& g, CohesionProperty property);

/// node_drop_prob(v) = (1 - f(w'(v)) * eps) * p_dr. Requires p_dr in (0,1),
/// eps in [0,1] (0 reproduces the uniform plan exactly) and probabilistic
/// weights.
DropPlan refined_drop_plan(const Graph& g, const ImportanceWeights& w, double p_dr, double eps,
                           DecayKind f_kind);

/// The eps = 0 baseline: every node and edge dropped with the same p_dr.
DropPlan uniform_drop_plan(const Graph& g, double p_dr);

/// Drops each node independently with its plan probability using the
/// counter stream keyed by (seed, node). If every node would drop, the node
/// with the lowest probability (ties: lowest index) is retained. Returns
/// the induced subgraph plus the survivor-origin mapping.
InducedView sample_node_drop(const Graph& g, const DropPlan& plan, std::uint64_t seed);

/// Drops each edge independently with its plan probability; the node set is
/// unchanged.
Graph sample_edge_drop(const Graph& g, const DropPlan& plan, std::uint64_t seed);

/// Mixes raw importance toward 1 with weight eta, then scales each edge
/// weight by the endpoint mean: w'_e = (w'_u + w'_v)/2 * w_e. Topology is
/// unchanged.
Graph reweight_edges(const Graph& g, const ImportanceWeights& w_raw, double eta);

/// Personalized-PageRank diffusion S = alpha * (I - (1-alpha) * T)^{-1}
/// with T the symmetrically degree-normalized (weighted) adjacency.
struct DiffusionMatrix {
  Eigen::MatrixXd s;
  double alpha = 0.2;
};

DiffusionMatrix ppr_diffusion(const Graph& g, double alpha);

/// Mean over `samples` node-drop draws of the fraction of the main
/// (k_max-order) cohesive subgraph's nodes that survive.
double preservation_ratio(const Graph& g, const DropPlan& plan, CohesionProperty property,
                          int samples, std::uint64_t seed);

}  // namespace cogl
