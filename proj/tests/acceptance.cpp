// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// non-skipped criterion fails. Dataset-gated criteria report SKIP when the
// TU files are absent (looked up in $COGL_DATA_DIR, ./data, ../data,
// ../../data).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cogl/augment.hpp"
#include "cogl/cohesion.hpp"
#include "cogl/encoder.hpp"
#include "cogl/eval.hpp"
#include "cogl/pipeline.hpp"
#include "cogl/rng.hpp"
#include "cogl/substructure.hpp"
#include "cogl/tu_io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cogl;

namespace {

std::string failure;  // set by check() on first failure within a criterion

void check(bool ok, const std::string& what) {
  if (!ok && failure.empty()) failure = what;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return std::string(buf);
}

bool connected(const Graph& g) {
  if (g.node_count == 0) return true;
  auto adj = adjacency_lists(g);
  std::vector<char> seen(g.node_count, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : adj[v])
      if (!seen[u]) {
        seen[u] = 1;
        ++visited;
        stack.push_back(u);
      }
  }
  return visited == g.node_count;
}

std::filesystem::path find_dataset_dir(const std::string& name) {
  std::vector<std::filesystem::path> candidates;
  if (const char* env = std::getenv("COGL_DATA_DIR"); env != nullptr && *env != '\0')
    candidates.emplace_back(env);
  candidates.emplace_back("data");
  candidates.emplace_back("../data");
  candidates.emplace_back("../../data");
  for (const auto& base : candidates) {
    if (std::filesystem::exists(base / name / (name + "_A.txt"))) return base / name;
    if (std::filesystem::exists(base / (name + "_A.txt"))) return base;
  }
  return {};
}

// ---- criterion bodies ----

void criterion_decomposition() {
  int tested = 0;
  auto verify = [&](const Graph& g) {
    ++tested;
    check(core_numbers(g).core_number == oracle::naive_core_numbers(g),
          "core numbers diverge from the peeling oracle");
    if (g.edge_count() > 0)
      check(truss_numbers(g).truss_number == oracle::naive_truss_numbers(g),
            "truss numbers diverge from the peeling oracle");
  };

  // exhaustive over all connected graphs on 2..5 nodes
  for (int n = 2; n <= 5; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
      Graph g;
      g.node_count = n;
      for (std::size_t b = 0; b < pairs.size(); ++b)
        if (mask & (1u << b)) g.edges.push_back(pairs[b]);
      g.edge_weights.assign(g.edges.size(), 1.0);
      if (connected(g)) verify(g);
    }
  }
  // sampled connected graphs on 6..9 nodes
  for (int n = 6; n <= 9; ++n)
    for (std::uint64_t seed = 0; seed < 50; ++seed)
      verify(oracle::random_connected_graph(n, 0.25, mix(1000, n, seed)));
  // 200 seeded random graphs with up to 20 nodes
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 5 + static_cast<int>(seed % 16);
    const double p = 0.15 + 0.025 * static_cast<double>(seed % 9);
    verify(oracle::random_graph(n, p, mix(2000, seed)));
  }
  // 771 exhaustive connected graphs on 2..5 nodes, 200 sampled on 6..9,
  // 200 random up to 20 nodes
  check(tested == 1171, "expected 1171 graphs, exercised " + std::to_string(tested));
}

void criterion_cliques() {
  std::vector<int> sizes{3, 4, 5};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 6 + static_cast<int>(seed % 7);  // 6..12 nodes
    const double p = 0.25 + 0.05 * static_cast<double>(seed % 6);
    auto g = oracle::random_graph(n, p, mix(3000, seed));
    auto fast = count_cliques_per_node(g, sizes);
    auto brute = oracle::brute_clique_counts(g, sizes);
    check((fast.values - brute).cwiseAbs().maxCoeff() == 0.0,
          "clique counts diverge from subset enumeration");
  }
}

double dataset_preservation(const GraphDataset& ds, CohesionProperty property, bool refined,
                            double p_dr, double eps, int samples, std::uint64_t seed) {
  double total = 0.0;
  for (int gi = 0; gi < ds.size(); ++gi) {
    const auto& g = ds.graphs[gi];
    auto plan = refined ? refined_drop_plan(g, vertex_importance_prob(g, property), p_dr, eps,
                                            DecayKind::Square)
                        : uniform_drop_plan(g, p_dr);
    total += preservation_ratio(g, plan, property, samples, mix(seed, gi));
  }
  return total / ds.size();
}

std::string criterion_preservation() {
  auto ds = generate_synthetic("planted-clique", 100, 7);
  double uniform = dataset_preservation(ds, CohesionProperty::Core, false, 0.2, 0.2, 1000, 41);
  check(std::abs(uniform - 0.800) <= 0.005,
        "uniform preservation " + fmt(uniform) + " outside 0.800 +/- 0.005");
  double refined = dataset_preservation(ds, CohesionProperty::Core, true, 0.2, 0.2, 1000, 42);
  check(std::abs(refined - 0.840) <= 0.010,
        "refined preservation " + fmt(refined) + " outside 0.840 +/- 0.010");
  if (!failure.empty()) return "";

  auto imdb_dir = find_dataset_dir("IMDB-B");
  if (imdb_dir.empty())
    return "synthetic ok (uniform " + fmt(uniform) + ", refined " + fmt(refined) +
           "); IMDB-B absent, paper value not checked";
  auto imdb = load_tu_dataset(imdb_dir, "IMDB-B");
  double paper = dataset_preservation(imdb, CohesionProperty::Core, true, 0.2, 0.2, 1000, 43);
  check(std::abs(paper - 0.837) <= 0.010,
        "IMDB-B refined preservation " + fmt(paper) + " outside 0.837 +/- 0.010");
  return failure.empty() ? "uniform " + fmt(uniform) + ", refined " + fmt(refined) +
                               ", IMDB-B " + fmt(paper)
                         : "";
}

void criterion_diffusion() {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 4 + static_cast<int>(seed % 12);
    auto g = oracle::random_connected_graph(n, 0.3, mix(4000, seed));
    if (seed % 3 == 0) {
      RngStream stream(mix(4400, seed));
      for (auto& w : g.edge_weights) w = 0.5 + stream.next_double();
    }
    const double alpha = 0.1 + 0.08 * static_cast<double>(seed % 10);
    auto d = ppr_diffusion(g, alpha);

    // residual against the defining linear system, recomputed here
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
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - (1.0 - alpha) * t;
    double residual =
        (system * d.s - alpha * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    check(residual < 1e-8, "diffusion residual " + std::to_string(residual) + " >= 1e-8");
  }

  Graph pair(2, {{0, 1}});
  Eigen::MatrixXd expected(2, 2);
  expected << 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0;
  check((ppr_diffusion(pair, 0.5).s - expected).cwiseAbs().maxCoeff() < 1e-12,
        "2-node alpha=0.5 diffusion is off the closed form");
  auto tri = fixtures::triangle();
  check((ppr_diffusion(tri, 1.0).s - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
            1e-12,
        "alpha=1 diffusion is not the identity");
}

void criterion_gradcheck() {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const bool ogsn = seed % 2 == 1;
    EncoderConfig cfg;
    cfg.layer_count = 2 + static_cast<int>(seed % 2);
    cfg.hidden_dim = 4 + static_cast<int>(seed % 3);
    cfg.use_ogsn = ogsn;
    cfg.gin_eps_learnable = true;
    cfg.seed = mix(5000, seed);
    const int feat_dim = 1 + static_cast<int>(seed % 3);
    const int sub_dim = ogsn ? 2 : 0;
    auto st = init_state(cfg, feat_dim, sub_dim);

    std::vector<EncodeInput> anchors, positives;
    RngStream stream(mix(5100, seed));
    const int pairs = 2 + static_cast<int>(seed % 3);
    for (int i = 0; i < pairs; ++i) {
      for (int side = 0; side < 2; ++side) {
        auto g = oracle::random_connected_graph(
            4 + static_cast<int>(stream.next_below(7)), 0.3, mix(5200, seed, i * 2 + side));
        Eigen::MatrixXd feats(g.node_count, feat_dim);
        for (int r = 0; r < g.node_count; ++r)
          for (int c = 0; c < feat_dim; ++c) feats(r, c) = 2.0 * stream.next_double() - 1.0;
        g.node_features = feats;
        EncodeInput input;
        if (ogsn) {
          Eigen::MatrixXd sub(g.node_count, sub_dim);
          for (int r = 0; r < g.node_count; ++r)
            for (int c = 0; c < sub_dim; ++c) sub(r, c) = stream.next_double();
          input.substructure = sub;
        }
        input.graph = std::move(g);
        (side == 0 ? anchors : positives).push_back(std::move(input));
      }
    }
    double err = gradcheck(st, anchors, positives, 0.5 + 0.1 * static_cast<double>(seed % 4));
    check(err < 1e-4, "gradcheck relative error " + std::to_string(err) + " >= 1e-4");
  }
}

void criterion_expressiveness() {
  auto two_k3 = fixtures::two_triangles();
  auto c6 = fixtures::cycle(6);
  two_k3.node_features = Eigen::MatrixXd::Ones(6, 1);
  c6.node_features = Eigen::MatrixXd::Ones(6, 1);
  auto tri_a = count_cliques_per_node(two_k3, std::vector<int>{3});
  auto tri_b = count_cliques_per_node(c6, std::vector<int>{3});

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    EncoderConfig cfg;
    cfg.layer_count = 3;
    cfg.hidden_dim = 16;
    cfg.seed = seed;
    cfg.use_ogsn = false;
    auto st = init_state(cfg, 1, 0);
    double plain = (encode(two_k3, nullptr, st) - encode(c6, nullptr, st)).norm();
    check(plain <= 1e-9, "plain GIN separated the 1-WL twins: " + std::to_string(plain));

    cfg.use_ogsn = true;
    auto st_ogsn = init_state(cfg, 1, 1);
    double aware =
        (encode(two_k3, &tri_a.values, st_ogsn) - encode(c6, &tri_b.values, st_ogsn)).norm();
    check(aware > 1e-3, "substructure encoder failed to separate the twins: " +
                            std::to_string(aware));
  }
}

std::string criterion_end_to_end() {
  int wins = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    PipelineConfig cohesion_aware;
    cohesion_aware.synthetic_graphs = 100;
    cohesion_aware.eps = 0.2;
    cohesion_aware.f_kind = DecayKind::Square;
    cohesion_aware.use_ogsn = true;
    cohesion_aware.seed = seed;
    cohesion_aware.out_dir =
        (std::filesystem::temp_directory_path() / ("cogl_acc7_ct_" + std::to_string(seed)))
            .string();

    PipelineConfig baseline = cohesion_aware;
    baseline.eps = 0.0;
    baseline.use_ogsn = false;
    baseline.out_dir =
        (std::filesystem::temp_directory_path() / ("cogl_acc7_base_" + std::to_string(seed)))
            .string();

    double full = run_pipeline(cohesion_aware).evaluation.mean_accuracy;
    double plain = run_pipeline(baseline).evaluation.mean_accuracy;
    detail << " s" << seed << ":" << fmt(full) << ">" << fmt(plain);
    if (full > plain) ++wins;
    check(full >= 0.6,
          "full pipeline accuracy " + fmt(full) + " under 0.6 at seed " + std::to_string(seed));
    check(plain >= 0.6,
          "baseline accuracy " + fmt(plain) + " under 0.6 at seed " + std::to_string(seed));
  }
  check(wins >= 4, "cohesion-aware run won only " + std::to_string(wins) + "/5 seeds");
  return failure.empty() ? "wins " + std::to_string(wins) + "/5;" + detail.str() : "";
}

std::string criterion_cohesion_baseline() {
  auto imdb_dir = find_dataset_dir("IMDB-B");
  if (imdb_dir.empty()) return "SKIP: IMDB-B files absent";
  auto imdb = load_tu_dataset(imdb_dir, "IMDB-B");
  std::array props{CohesionProperty::Core};
  auto eval = cohesion_baseline(imdb, 10, props, 10, 5, 1e-3, 7);
  check(std::abs(eval.mean_accuracy - 0.699) <= 0.020,
        "IMDB-B cohesion-feature accuracy " + fmt(eval.mean_accuracy) +
            " outside 0.699 +/- 0.020");
  return failure.empty()
             ? "accuracy " + fmt(eval.mean_accuracy) + " +/- " + fmt(eval.std_accuracy)
             : "";
}

void criterion_determinism() {
  PipelineConfig cfg;
  cfg.synthetic_graphs = 24;
  cfg.encoder.epochs = 3;
  cfg.encoder.hidden_dim = 8;
  cfg.folds = 4;
  cfg.seed = 11;
  cfg.jobs = 1;
  cfg.out_dir = (std::filesystem::temp_directory_path() / "cogl_acc9_a").string();
  std::filesystem::remove_all(cfg.out_dir);
  run_pipeline(cfg);

  auto manifest = parse_config(std::filesystem::path(cfg.out_dir) / "manifest.txt");
  manifest.out_dir = (std::filesystem::temp_directory_path() / "cogl_acc9_b").string();
  std::filesystem::remove_all(manifest.out_dir);
  manifest.jobs = 4;
  run_pipeline(manifest);

  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  auto a = slurp(std::filesystem::path(cfg.out_dir) / "metrics.csv");
  auto b = slurp(std::filesystem::path(manifest.out_dir) / "metrics.csv");
  check(!a.empty() && a == b, "metrics.csv differs between manifest re-runs");
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<std::string()> body;  // returns extra detail or a SKIP reason
};

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "decomposition matches the repeated-deletion oracle", 30,
       [] { criterion_decomposition(); return std::string(); }},
      {2, "clique counts match exhaustive enumeration", 60,
       [] { criterion_cliques(); return std::string(); }},
      {3, "preservation ratios (uniform 0.800, refined 0.840)", 120, criterion_preservation},
      {4, "diffusion residuals and closed forms", 120,
       [] { criterion_diffusion(); return std::string(); }},
      {5, "analytic gradients match finite differences", 120,
       [] { criterion_gradcheck(); return std::string(); }},
      {6, "substructure features separate 1-WL twins", 10,
       [] { criterion_expressiveness(); return std::string(); }},
      {7, "cohesion-aware pipeline beats the uniform baseline", 300, criterion_end_to_end},
      {8, "cohesion-feature probe reproduces the published accuracy", 600,
       criterion_cohesion_baseline},
      {9, "manifest re-runs are byte-identical across job counts", 120,
       [] { criterion_determinism(); return std::string(); }},
  };

  int failures = 0;
  for (auto& criterion : criteria) {
    failure.clear();
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    try {
      detail = criterion.body();
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.budget_seconds)
      check(false, "runtime " + fmt(seconds) + " s exceeds " + fmt(criterion.budget_seconds) +
                       " s budget");

    const bool skipped = failure.empty() && detail.rfind("SKIP", 0) == 0;
    const char* status = skipped ? "SKIP" : failure.empty() ? "PASS" : "FAIL";
    if (!skipped && !failure.empty()) ++failures;
    const std::string& note = failure.empty() ? detail : failure;
    std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", status, criterion.id,
                criterion.name.c_str(), seconds, note.empty() ? "" : " -- ", note.c_str());
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all non-skipped criteria passed\n");
  return 0;
}
