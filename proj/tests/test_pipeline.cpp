#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cogl/cohesion.hpp"
#include "cogl/error.hpp"
#include "cogl/pipeline.hpp"

using namespace cogl;

namespace {

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("cogl_pipe_" + tag);
  std::filesystem::remove_all(dir);
  return dir;
}

PipelineConfig tiny_config(const std::string& tag) {
  PipelineConfig cfg;
  cfg.synthetic_graphs = 16;
  cfg.encoder.epochs = 2;
  cfg.encoder.hidden_dim = 6;
  cfg.encoder.batch_size = 8;
  cfg.folds = 4;
  cfg.eps = 0.2;
  cfg.seed = 5;
  cfg.out_dir = fresh_dir(tag).string();
  return cfg;
}

}  // namespace

TEST_CASE("synthetic planted-clique datasets") {
  auto ds = generate_synthetic("planted-clique", 100, 7);
  REQUIRE(ds.size() == 100);
  int positives = 0;
  for (int i = 0; i < ds.size(); ++i) positives += ds.labels[i];
  CHECK(positives == 50);

  for (int i = 0; i < ds.size(); ++i) {
    CHECK(validate_graph(ds.graphs[i]).empty());
    if (ds.labels[i] == 1) CHECK(core_numbers(ds.graphs[i]).k_max >= 4);
  }
  // pairwise edge-count matching
  for (int pair = 0; pair < 50; ++pair)
    CHECK(ds.graphs[2 * pair].edge_count() == ds.graphs[2 * pair + 1].edge_count());

  auto again = generate_synthetic("planted-clique", 100, 7);
  for (int i = 0; i < ds.size(); ++i) CHECK(again.graphs[i].edges == ds.graphs[i].edges);

  auto two = generate_synthetic("planted-clique", 2, 1);
  CHECK(two.labels == std::vector<int>{0, 1});

  CHECK_THROWS_AS(generate_synthetic("planted-clique", 3, 1), ArgumentError);
  CHECK_THROWS_AS(generate_synthetic("nope", 10, 1), ArgumentError);

  auto dens = generate_synthetic("two-density", 20, 3);
  double lo = 0, hi = 0;
  for (int i = 0; i < dens.size(); ++i)
    (dens.labels[i] == 0 ? lo : hi) += dens.graphs[i].edge_count();
  CHECK(hi > lo);
}

TEST_CASE("config grammar round trips") {
  PipelineConfig cfg;
  cfg.dataset_kind = "tu";
  cfg.dataset_path = "/data/tu";
  cfg.dataset_name = "IMDB-B";
  cfg.properties = {CohesionProperty::Truss};
  cfg.eps = 0.35;
  cfg.f_kind = DecayKind::Sqrt;
  cfg.encoder.hidden_dim = 48;
  cfg.encoder.optimizer = OptimizerKind::Sgd;
  cfg.substructure.clique_sizes = {3, 4};
  cfg.substructure.normalization = SubstructureNorm::MaxPerGraph;
  cfg.use_ogsn = false;
  cfg.repeats = 5;
  cfg.seed = 99;

  auto text = render_config(cfg);
  auto back = parse_config_text(text, "roundtrip");
  CHECK(back.dataset_kind == cfg.dataset_kind);
  CHECK(back.dataset_name == cfg.dataset_name);
  CHECK(back.properties == cfg.properties);
  CHECK(back.eps == cfg.eps);
  CHECK(back.f_kind == cfg.f_kind);
  CHECK(back.encoder.hidden_dim == 48);
  CHECK(back.encoder.optimizer == OptimizerKind::Sgd);
  CHECK(back.substructure.clique_sizes == cfg.substructure.clique_sizes);
  CHECK(back.substructure.normalization == cfg.substructure.normalization);
  CHECK(back.use_ogsn == false);
  CHECK(back.repeats == 5);
  CHECK(back.seed == 99);
}

TEST_CASE("config parser rejects malformed input") {
  CHECK_THROWS_AS(parse_config_text("[encoder]\nlayers = abc\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_config_text("[encoder]\nunknown_key = 3\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_config_text("layers 3\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_config_text("[encoder\nlayers = 3\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_config_text("[augment]\nproperties = banana\n", "t"), ArgumentError);

  // comments and auto values parse
  auto cfg = parse_config_text("# comment\n[augment]\neps = auto\neta = auto\n", "t");
  CHECK(cfg.eps < 0.0);
  CHECK(cfg.resolved_eps() == 0.2);
}

TEST_CASE("per-dataset decay defaults follow the published grid") {
  CHECK(default_eps_for_dataset("IMDB-B") == 0.2);
  CHECK(default_eps_for_dataset("imdb-m") == 0.4);
  CHECK(default_eps_for_dataset("PROTEINS") == 0.8);
  CHECK(default_eps_for_dataset("unknown-dataset") == 0.2);
  CHECK(default_eta_for_dataset("IMDB-B") == 0.4);
  CHECK(default_eta_for_dataset("collab") == 0.2);
  CHECK(default_eta_for_dataset("enzymes") == 0.6);
}

TEST_CASE("pipeline produces its documented artifacts") {
  auto cfg = tiny_config("artifacts");
  auto report = run_pipeline(cfg);
  CHECK(report.evaluation.folds.size() == 4);
  CHECK(report.embeddings.rows() == 16);
  CHECK(report.embeddings.cols() == cfg.encoder.hidden_dim * 2);  // core + truss
  REQUIRE(report.loss_history.size() == 2);
  CHECK(!report.loss_history[0].empty());

  auto out = std::filesystem::path(cfg.out_dir);
  for (const char* name : {"metrics.csv", "embeddings.csv", "labels.csv", "manifest.txt",
                           "state.core.bin", "state.truss.bin", "loss.core.csv",
                           "loss.truss.csv"})
    CHECK(std::filesystem::exists(out / name));

  auto manifest = slurp(out / "manifest.txt");
  CHECK(manifest.find("# status = complete") != std::string::npos);
}

TEST_CASE("manifest reruns reproduce every artifact byte for byte") {
  auto cfg = tiny_config("rerun_a");
  run_pipeline(cfg);

  // re-run from the manifest, into a fresh directory, with a different job cap
  auto manifest = std::filesystem::path(cfg.out_dir) / "manifest.txt";
  auto cfg2 = parse_config(manifest);
  cfg2.out_dir = fresh_dir("rerun_b").string();
  cfg2.jobs = 4;
  run_pipeline(cfg2);

  auto slurp_binary = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  for (const char* name : {"metrics.csv", "embeddings.csv", "labels.csv", "loss.core.csv",
                           "loss.truss.csv", "state.core.bin", "state.truss.bin"})
    CHECK(slurp_binary(std::filesystem::path(cfg.out_dir) / name) ==
          slurp_binary(std::filesystem::path(cfg2.out_dir) / name));
}

TEST_CASE("pipeline failures carry the stage and flag the manifest") {
  PipelineConfig cfg = tiny_config("fail");
  cfg.dataset_kind = "tu";
  cfg.dataset_path = "/nonexistent/dir";
  cfg.dataset_name = "nope";
  try {
    run_pipeline(cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("load:") != std::string::npos);
    CHECK(e.code() == ExitCode::Format);  // missing TU file family
  }
  auto manifest = slurp(std::filesystem::path(cfg.out_dir) / "manifest.txt");
  CHECK(manifest.find("# status = failed") != std::string::npos);
  CHECK(manifest.find("# stage = load") != std::string::npos);
}

TEST_CASE("ablation config reduces to the uniform baseline path") {
  auto cfg = tiny_config("ablate");
  cfg.eps = 0.0;
  cfg.use_ogsn = false;
  auto report = run_pipeline(cfg);
  CHECK(report.embeddings.allFinite());
  // substructure features off: both properties still train, dims unchanged
  CHECK(report.embeddings.cols() == cfg.encoder.hidden_dim * 2);
}

TEST_CASE("degree one-hot features flow through the pipeline") {
  auto cfg = tiny_config("degrees");
  cfg.features = FeatureKind::DegreeOneHot;
  cfg.properties = {CohesionProperty::Core};
  auto report = run_pipeline(cfg);
  CHECK(report.embeddings.allFinite());
  CHECK(report.embeddings.cols() == cfg.encoder.hidden_dim);
}
