#include "cogl/augment.hpp"

#include <algorithm>
#include <cmath>

#include "cogl/error.hpp"
#include "cogl/rng.hpp"

namespace cogl {

const char* to_string(DecayKind f) {
  switch (f) {
    case DecayKind::Linear: return "linear";
    case DecayKind::Sqrt: return "sqrt";
    case DecayKind::Square: return "square";
  }
  return "?";
}

DecayKind decay_kind_from_string(const std::string& s) {
  if (s == "linear") return DecayKind::Linear;
  if (s == "sqrt") return DecayKind::Sqrt;
  if (s == "square") return DecayKind::Square;
  throw ArgumentError("unknown decay function '" + s + "' (expected linear|sqrt|square)");
}

namespace {

double apply_decay(DecayKind f, double x) {
  switch (f) {
    case DecayKind::Linear: return x;
    case DecayKind::Sqrt: return std::sqrt(x);
    case DecayKind::Square: return x * x;
  }
  return x;
}

// Membership counts of each node over the cohesive subgraphs of order
// k_lo..k_max. Because cohesive subgraphs are nested, node v belongs to
// exactly max(0, level(v) - k_lo + 1) of them, where level is the node's
// core number (or its best incident truss number).
Eigen::VectorXd membership_counts(const Graph& g, CohesionProperty property, int k_lo) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(g.node_count);
  if (property == CohesionProperty::Core) {
    auto dec = core_numbers(g);
    for (int v = 0; v < g.node_count; ++v)
      counts[v] = std::max(0, dec.core_number[v] - k_lo + 1);
  } else {
    auto dec = truss_numbers(g);
    std::vector<int> level(g.node_count, 0);
    for (int i = 0; i < g.edge_count(); ++i) {
      level[g.edges[i].first] = std::max(level[g.edges[i].first], dec.truss_number[i]);
      level[g.edges[i].second] = std::max(level[g.edges[i].second], dec.truss_number[i]);
    }
    for (int v = 0; v < g.node_count; ++v) counts[v] = std::max(0, level[v] - k_lo + 1);
  }
  return counts;
}

int main_order(const Graph& g, CohesionProperty property) {
  if (property == CohesionProperty::Core) return core_numbers(g).k_max;
  return truss_numbers(g).k_max;
}

}  // namespace

ImportanceWeights vertex_importance_prob(const Graph& g, CohesionProperty property) {
  ImportanceWeights w;
  w.mode = WeightMode::Probabilistic;
  if (g.edge_count() == 0) {
    w.values = Eigen::VectorXd::Zero(g.node_count);
    w.normalizer = 0.0;
    return w;
  }
  const int floor_k = property == CohesionProperty::Core ? 1 : 2;
  const int k_top = main_order(g, property);
  const int k_lo = std::max(k_top - 2, floor_k);
  w.values = membership_counts(g, property, k_lo);
  w.normalizer = w.values.maxCoeff();
  if (w.normalizer > 0) w.values /= w.normalizer;
  return w;
}

ImportanceWeights vertex_importance_det(const Graph& g, CohesionProperty property) {
  ImportanceWeights w;
  w.mode = WeightMode::Deterministic;
  if (g.edge_count() == 0) {
    w.values = Eigen::VectorXd::Zero(g.node_count);
    w.normalizer = 0.0;
    return w;
  }
  const int k_lo = property == CohesionProperty::Core ? 1 : 2;
  w.values = membership_counts(g, property, k_lo);
  w.normalizer = w.values.mean();
  return w;
}

DropPlan refined_drop_plan(const Graph& g, const ImportanceWeights& w, double p_dr, double eps,
                           DecayKind f_kind) {
  if (!(p_dr > 0.0 && p_dr < 1.0)) throw ArgumentError("refined_drop_plan: p_dr must be in (0,1)");
  if (!(eps >= 0.0 && eps <= 1.0)) throw ArgumentError("refined_drop_plan: eps must be in [0,1]");
  if (w.mode != WeightMode::Probabilistic)
    throw ArgumentError("refined_drop_plan: weights must be probabilistic-mode");
  if (w.values.size() != g.node_count)
    throw ArgumentError("refined_drop_plan: weight size does not match graph");

  DropPlan plan;
  plan.base_p_dr = p_dr;
  plan.epsilon = eps;
  plan.f_kind = f_kind;
  plan.node_drop_prob.resize(g.node_count);
  for (int v = 0; v < g.node_count; ++v)
    plan.node_drop_prob[v] = (1.0 - apply_decay(f_kind, w.values[v]) * eps) * p_dr;
  plan.edge_drop_prob.resize(g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i)
    plan.edge_drop_prob[i] =
        (plan.node_drop_prob[g.edges[i].first] + plan.node_drop_prob[g.edges[i].second]) / 2.0;
  return plan;
}

DropPlan uniform_drop_plan(const Graph& g, double p_dr) {
  if (!(p_dr >= 0.0 && p_dr < 1.0))
    throw ArgumentError("uniform_drop_plan: p_dr must be in [0,1)");
  DropPlan plan;
  plan.base_p_dr = p_dr;
  plan.epsilon = 0.0;
  plan.node_drop_prob = Eigen::VectorXd::Constant(g.node_count, p_dr);
  plan.edge_drop_prob = Eigen::VectorXd::Constant(g.edge_count(), p_dr);
  return plan;
}

InducedView sample_node_drop(const Graph& g, const DropPlan& plan, std::uint64_t seed) {
  if (plan.node_drop_prob.size() != g.node_count)
    throw ArgumentError("sample_node_drop: plan does not match graph");
  std::vector<int> kept;
  kept.reserve(g.node_count);
  for (int v = 0; v < g.node_count; ++v)
    if (uniform01(seed, static_cast<std::uint64_t>(v)) >= plan.node_drop_prob[v]) kept.push_back(v);
  if (kept.empty() && g.node_count > 0) {
    int best = 0;
    for (int v = 1; v < g.node_count; ++v)
      if (plan.node_drop_prob[v] < plan.node_drop_prob[best]) best = v;
    kept.push_back(best);
  }
  return induced_subgraph(g, kept);
}

Graph sample_edge_drop(const Graph& g, const DropPlan& plan, std::uint64_t seed) {
  if (plan.edge_drop_prob.size() != g.edge_count())
    throw ArgumentError("sample_edge_drop: plan does not match graph");
  Graph out;
  out.node_count = g.node_count;
  out.node_features = g.node_features;
  for (int i = 0; i < g.edge_count(); ++i) {
    if (uniform01(seed, static_cast<std::uint64_t>(i)) >= plan.edge_drop_prob[i]) {
      out.edges.push_back(g.edges[i]);
      out.edge_weights.push_back(g.edge_weights[i]);
    }
  }
  return out;
}

Graph reweight_edges(const Graph& g, const ImportanceWeights& w_raw, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("reweight_edges: eta must be in [0,1]");
  if (g.edge_count() == 0) throw EmptyError("reweight_edges: graph has no edges");
  if (w_raw.mode != WeightMode::Deterministic || w_raw.values.size() != g.node_count)
    throw ArgumentError("reweight_edges: weights must be deterministic-mode for this graph");

  const double mean = w_raw.normalizer;
  Eigen::VectorXd mixed(g.node_count);
  for (int v = 0; v < g.node_count; ++v) mixed[v] = eta * w_raw.values[v] / mean + (1.0 - eta);

  Graph out = g;
  for (int i = 0; i < g.edge_count(); ++i)
    out.edge_weights[i] =
        0.5 * (mixed[g.edges[i].first] + mixed[g.edges[i].second]) * g.edge_weights[i];
  return out;
}

DiffusionMatrix ppr_diffusion(const Graph& g, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("ppr_diffusion: alpha must be in (0,1]");
  const int n = g.node_count;
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < g.edge_count(); ++i) {
    auto [u, v] = g.edges[i];
    double w = g.edge_weights[i];
    a(u, v) += w;
    a(v, u) += w;
    degree[u] += w;
    degree[v] += w;
  }
  for (int v = 0; v < n; ++v)
    if (!(degree[v] > 0.0))
      throw ArgumentError("ppr_diffusion: node " + std::to_string(v) + " has zero weighted degree");

  Eigen::VectorXd inv_sqrt = degree.array().rsqrt();
  Eigen::MatrixXd t = inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - (1.0 - alpha) * t;

  DiffusionMatrix out;
  out.alpha = alpha;
  out.s = system.partialPivLu().solve(alpha * Eigen::MatrixXd::Identity(n, n));

  double residual = (system * out.s - alpha * Eigen::MatrixXd::Identity(n, n))
                        .array()
                        .abs()
                        .maxCoeff();
  if (!(residual < 1e-8))
    throw Error(ExitCode::Other,
                "ppr_diffusion: residual " + std::to_string(residual) + " exceeds 1e-8");
  return out;
}

double preservation_ratio(const Graph& g, const DropPlan& plan, CohesionProperty property,
                          int samples, std::uint64_t seed) {
  if (samples < 1) throw ArgumentError("preservation_ratio: samples must be >= 1");
  if (g.edge_count() == 0) throw EmptyError("preservation_ratio: main cohesive subgraph is empty");
  auto main_set = cohesive_node_set(g, property, main_order(g, property));
  if (main_set.empty()) throw EmptyError("preservation_ratio: main cohesive subgraph is empty");

  std::vector<char> in_main(g.node_count, 0);
  for (int v : main_set) in_main[v] = 1;

  double total = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto view = sample_node_drop(g, plan, mix(seed, static_cast<std::uint64_t>(s)));
    int retained = 0;
    for (int v : view.origin) retained += in_main[v];
    total += static_cast<double>(retained) / static_cast<double>(main_set.size());
  }
  return total / samples;
}

}  // namespace cogl
