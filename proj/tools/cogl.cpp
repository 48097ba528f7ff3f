// Command-line front end: decompose / features / augment / diffuse / train /
// evaluate / stats / synth / pipeline subcommands over the library.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cogl/augment.hpp"
#include "cogl/cohesion.hpp"
#include "cogl/encoder.hpp"
#include "cogl/error.hpp"
#include "cogl/eval.hpp"
#include "cogl/pipeline.hpp"
#include "cogl/rng.hpp"
#include "cogl/substructure.hpp"
#include "cogl/tu_io.hpp"

namespace {

struct DatasetOptions {
  std::string tu_dir;
  std::string name;
  std::string synthetic;
  int n_graphs = 100;
  std::uint64_t seed = 7;
};

void add_dataset_options(CLI::App* cmd, DatasetOptions& opt) {
  cmd->add_option("--tu", opt.tu_dir, "TU dataset directory");
  cmd->add_option("--name", opt.name, "TU dataset name");
  cmd->add_option("--synthetic", opt.synthetic, "synthetic kind (planted-clique|two-density)");
  cmd->add_option("--n-graphs", opt.n_graphs, "synthetic graph count");
  cmd->add_option("--seed", opt.seed, "seed");
}

cogl::GraphDataset load_dataset(const DatasetOptions& opt) {
  if (!opt.synthetic.empty()) return cogl::generate_synthetic(opt.synthetic, opt.n_graphs, opt.seed);
  if (opt.tu_dir.empty() || opt.name.empty())
    throw cogl::ArgumentError("need either --synthetic or --tu DIR --name NAME");
  return cogl::load_tu_dataset(opt.tu_dir, opt.name);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw cogl::IoError("cannot write " + path);
  return file;
}

std::vector<cogl::CohesionProperty> parse_properties(const std::string& csv) {
  std::vector<cogl::CohesionProperty> properties;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) properties.push_back(cogl::cohesion_property_from_string(item));
  if (properties.empty()) throw cogl::ArgumentError("empty property list");
  return properties;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

Eigen::MatrixXd read_embeddings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cogl::IoError("cannot open embeddings " + path);
  std::string line;
  if (!std::getline(in, line)) throw cogl::FormatError("empty embeddings file " + path);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (first) {  // leading graph index column
        first = false;
        continue;
      }
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw cogl::ParseError("embeddings " + path + ": bad number '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw cogl::FormatError("no embedding rows in " + path);
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw cogl::FormatError("ragged embedding rows in " + path);
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<int> read_labels_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cogl::IoError("cannot open labels " + path);
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      labels.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw cogl::ParseError("labels " + path + ": bad integer '" + line + "'");
    }
  }
  return labels;
}

int run(int argc, char** argv) {
  CLI::App app{"cohesion-aware graph contrastive learning toolkit"};
  app.require_subcommand(1);

  // decompose
  auto* decompose = app.add_subcommand("decompose", "core/truss numbers as CSV");
  DatasetOptions dec_data;
  std::string dec_graph, dec_property = "core", dec_out;
  add_dataset_options(decompose, dec_data);
  decompose->add_option("--graph", dec_graph, "single graph in native text format");
  decompose->add_option("--property", dec_property, "core|truss");
  decompose->add_option("--out", dec_out, "output file (default stdout)");

  // features
  auto* features = app.add_subcommand("features", "per-node clique counts as CSV");
  DatasetOptions feat_data;
  std::string feat_sizes = "3,4,5", feat_norm = "none", feat_out;
  add_dataset_options(features, feat_data);
  features->add_option("--sizes", feat_sizes, "clique sizes, comma separated");
  features->add_option("--normalization", feat_norm, "none|log1p|max-per-graph");
  features->add_option("--out", feat_out, "output file (default stdout)");

  // augment
  auto* augment = app.add_subcommand("augment", "sample refined node/edge-drop views");
  std::string aug_graph, aug_property = "core", aug_f = "square", aug_mode = "node", aug_out = ".";
  double aug_p_dr = 0.2, aug_eps = 0.2;
  int aug_samples = 1;
  std::uint64_t aug_seed = 7;
  augment->add_option("--graph", aug_graph, "graph in native text format")->required();
  augment->add_option("--property", aug_property, "core|truss");
  augment->add_option("--p-dr", aug_p_dr, "base drop probability");
  augment->add_option("--eps", aug_eps, "decay factor in [0,1]");
  augment->add_option("--f", aug_f, "decay function linear|sqrt|square");
  augment->add_option("--mode", aug_mode, "node|edge");
  augment->add_option("--samples", aug_samples, "number of views");
  augment->add_option("--seed", aug_seed, "seed");
  augment->add_option("--out", aug_out, "output directory");

  // diffuse
  auto* diffuse = app.add_subcommand("diffuse", "personalized-PageRank diffusion matrix as CSV");
  std::string dif_graph, dif_property = "core", dif_out;
  double dif_alpha = 0.2, dif_eta = 0.0;
  diffuse->add_option("--graph", dif_graph, "graph in native text format")->required();
  diffuse->add_option("--alpha", dif_alpha, "teleport probability in (0,1]");
  diffuse->add_option("--eta", dif_eta, "cohesion reweighting strength in [0,1]");
  diffuse->add_option("--property", dif_property, "core|truss (for --eta > 0)");
  diffuse->add_option("--out", dif_out, "output file (default stdout)");

  // train
  auto* train = app.add_subcommand("train", "contrastive encoder training");
  DatasetOptions train_data;
  std::string train_props = "core,truss", train_f = "square", train_ogsn = "on", train_out = "state.bin";
  double train_eps = 0.2, train_p_dr = 0.2;
  cogl::EncoderConfig train_cfg;
  add_dataset_options(train, train_data);
  train->add_option("--property", train_props, "comma-separated cohesion properties");
  train->add_option("--eps", train_eps, "decay factor");
  train->add_option("--f", train_f, "decay function");
  train->add_option("--p-dr", train_p_dr, "base drop probability");
  train->add_option("--ogsn", train_ogsn, "on|off");
  train->add_option("--epochs", train_cfg.epochs, "training epochs");
  train->add_option("--layers", train_cfg.layer_count, "GIN layers");
  train->add_option("--hidden", train_cfg.hidden_dim, "hidden width");
  train->add_option("--batch", train_cfg.batch_size, "batch size");
  train->add_option("--lr", train_cfg.learning_rate, "learning rate");
  train->add_option("--tau", train_cfg.tau, "NT-Xent temperature");
  train->add_option("--out", train_out, "state file (suffix .<property> added when several)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "k-fold linear probe on frozen embeddings");
  std::string eval_embeddings, eval_labels, eval_out;
  int eval_folds = 10, eval_repeats = 1;
  double eval_l2 = 1e-3;
  std::uint64_t eval_seed = 7;
  evaluate->add_option("--embeddings", eval_embeddings, "embeddings CSV")->required();
  evaluate->add_option("--labels", eval_labels, "labels file, one per line")->required();
  evaluate->add_option("--folds", eval_folds, "fold count");
  evaluate->add_option("--repeats", eval_repeats, "re-seeded repetitions");
  evaluate->add_option("--l2", eval_l2, "probe L2 strength");
  evaluate->add_option("--seed", eval_seed, "seed");
  evaluate->add_option("--out", eval_out, "output file (default stdout)");

  // stats preservation
  auto* stats = app.add_subcommand("stats", "dataset statistics");
  auto* preservation = stats->add_subcommand("preservation", "cohesive-node preservation ratios");
  DatasetOptions pres_data;
  std::string pres_props = "core,truss", pres_f = "square", pres_out;
  double pres_p_dr = 0.2, pres_eps = 0.2;
  int pres_samples = 1000;
  add_dataset_options(preservation, pres_data);
  preservation->add_option("--property", pres_props, "comma-separated properties");
  preservation->add_option("--p-dr", pres_p_dr, "base drop probability");
  preservation->add_option("--eps", pres_eps, "decay factor");
  preservation->add_option("--f", pres_f, "decay function");
  preservation->add_option("--samples", pres_samples, "draws per graph");
  preservation->add_option("--out", pres_out, "output file (default stdout)");

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic dataset in TU format");
  std::string synth_kind = "planted-clique", synth_out = "data";
  int synth_n = 100;
  std::uint64_t synth_seed = 7;
  synth->add_option("--kind", synth_kind, "planted-clique|two-density");
  synth->add_option("--n-graphs", synth_n, "graph count (even)");
  synth->add_option("--seed", synth_seed, "seed");
  synth->add_option("--out", synth_out, "output directory");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "end-to-end run from a config file");
  std::string pipe_config, pipe_out;
  int pipe_jobs = 0;
  bool pipe_have_seed = false;
  std::uint64_t pipe_seed = 0;
  pipeline->add_option("--config", pipe_config, "config file")->required();
  pipeline->add_option("--out", pipe_out, "override output directory");
  pipeline->add_option("--jobs", pipe_jobs, "override worker cap");
  auto* pipe_seed_opt = pipeline->add_option("--seed", pipe_seed, "override seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(cogl::ExitCode::Argument);
  }
  pipe_have_seed = pipe_seed_opt->count() > 0;

  if (decompose->parsed()) {
    std::ofstream file;
    auto& out = open_output(file, dec_out);
    auto property = cogl::cohesion_property_from_string(dec_property);
    auto emit = [&](const cogl::Graph& g, int graph_index, bool with_graph_column) {
      if (property == cogl::CohesionProperty::Core) {
        auto dec = cogl::core_numbers(g);
        for (int v = 0; v < g.node_count; ++v) {
          if (with_graph_column) out << graph_index << ",";
          out << v << "," << dec.core_number[v] << "\n";
        }
      } else {
        auto dec = cogl::truss_numbers(g);
        for (int i = 0; i < g.edge_count(); ++i) {
          if (with_graph_column) out << graph_index << ",";
          out << g.edges[i].first << "," << g.edges[i].second << "," << dec.truss_number[i] << "\n";
        }
      }
    };
    if (!dec_graph.empty()) {
      out << (property == cogl::CohesionProperty::Core ? "node,core_number\n"
                                                       : "u,v,truss_number\n");
      emit(cogl::read_graph_text_file(dec_graph), 0, false);
    } else {
      auto ds = load_dataset(dec_data);
      out << (property == cogl::CohesionProperty::Core ? "graph,node,core_number\n"
                                                       : "graph,u,v,truss_number\n");
      for (int gi = 0; gi < ds.size(); ++gi) emit(ds.graphs[gi], gi, true);
    }
    return 0;
  }

  if (features->parsed()) {
    auto ds = load_dataset(feat_data);
    cogl::SubstructureSpec spec;
    spec.clique_sizes.clear();
    std::stringstream ss(feat_sizes);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) spec.clique_sizes.push_back(std::stoi(item));
    spec.normalization = cogl::substructure_norm_from_string(feat_norm);
    auto feats = cogl::ogsn_features(ds, spec);
    std::ofstream file;
    auto& out = open_output(file, feat_out);
    out << "graph,node";
    for (int size : spec.clique_sizes) out << ",c" << size;
    out << "\n";
    for (int gi = 0; gi < ds.size(); ++gi)
      for (int v = 0; v < ds.graphs[gi].node_count; ++v) {
        out << gi << "," << v;
        for (int c = 0; c < spec.dim(); ++c) out << "," << fmt(feats[gi].values(v, c));
        out << "\n";
      }
    return 0;
  }

  if (augment->parsed()) {
    auto g = cogl::read_graph_text_file(aug_graph);
    auto property = cogl::cohesion_property_from_string(aug_property);
    auto plan = cogl::refined_drop_plan(g, cogl::vertex_importance_prob(g, property), aug_p_dr,
                                        aug_eps, cogl::decay_kind_from_string(aug_f));
    std::filesystem::create_directories(aug_out);
    for (int s = 0; s < aug_samples; ++s) {
      char name[64];
      std::snprintf(name, sizeof(name), "aug_%04d.txt", s);
      const std::uint64_t draw = cogl::mix(aug_seed, static_cast<std::uint64_t>(s));
      if (aug_mode == "node") {
        cogl::write_graph_text_file(cogl::sample_node_drop(g, plan, draw).graph,
                                    std::filesystem::path(aug_out) / name);
      } else if (aug_mode == "edge") {
        cogl::write_graph_text_file(cogl::sample_edge_drop(g, plan, draw),
                                    std::filesystem::path(aug_out) / name);
      } else {
        throw cogl::ArgumentError("--mode must be node|edge");
      }
    }
    std::cout << "wrote " << aug_samples << " views under " << aug_out << "\n";
    return 0;
  }

  if (diffuse->parsed()) {
    auto g = cogl::read_graph_text_file(dif_graph);
    if (dif_eta > 0.0)
      g = cogl::reweight_edges(
          g, cogl::vertex_importance_det(g, cogl::cohesion_property_from_string(dif_property)),
          dif_eta);
    auto diffusion = cogl::ppr_diffusion(g, dif_alpha);
    std::ofstream file;
    auto& out = open_output(file, dif_out);
    for (int r = 0; r < diffusion.s.rows(); ++r) {
      for (int c = 0; c < diffusion.s.cols(); ++c) out << (c ? "," : "") << fmt(diffusion.s(r, c));
      out << "\n";
    }
    return 0;
  }

  if (train->parsed()) {
    auto ds = load_dataset(train_data);
    auto properties = parse_properties(train_props);
    train_cfg.seed = train_data.seed;
    train_cfg.use_ogsn = train_ogsn == "on";
    std::vector<cogl::SubstructureFeatures> ogsn;
    if (train_cfg.use_ogsn) ogsn = cogl::ogsn_features(ds, cogl::SubstructureSpec{});
    auto trained = cogl::train_per_property(ds, train_cfg, properties, train_eps,
                                            cogl::decay_kind_from_string(train_f), train_p_dr,
                                            train_cfg.use_ogsn ? &ogsn : nullptr);
    for (std::size_t pi = 0; pi < properties.size(); ++pi) {
      std::string path = train_out;
      if (properties.size() > 1) path += std::string(".") + cogl::to_string(properties[pi]);
      cogl::save_state(trained[pi].state, path);
      std::cout << cogl::to_string(properties[pi]) << ": " << trained[pi].loss_history.size()
                << " steps, final loss " << fmt(trained[pi].loss_history.back()) << " -> " << path
                << "\n";
    }
    return 0;
  }

  if (evaluate->parsed()) {
    auto embeddings = read_embeddings_csv(eval_embeddings);
    auto labels = read_labels_file(eval_labels);
    if (static_cast<Eigen::Index>(labels.size()) != embeddings.rows())
      throw cogl::ArgumentError("labels count does not match embedding rows");
    auto eval = cogl::repeated_probe(embeddings, labels, eval_folds, eval_repeats, eval_l2,
                                     eval_seed);
    std::ofstream file;
    auto& out = open_output(file, eval_out);
    out << "fold,repeat,accuracy,precision,recall\n";
    char buf[64];
    for (const auto& f : eval.folds) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%.6f", f.fold, f.repeat,
                    f.metrics.accuracy, f.metrics.macro_precision, f.metrics.macro_recall);
      out << buf << "\n";
    }
    std::snprintf(buf, sizeof(buf), "mean,all,%.6f,,\nstd,all,%.6f,,\n", eval.mean_accuracy,
                  eval.std_accuracy);
    out << buf;
    return 0;
  }

  if (preservation->parsed()) {
    auto ds = load_dataset(pres_data);
    auto properties = parse_properties(pres_props);
    auto f_kind = cogl::decay_kind_from_string(pres_f);
    std::ofstream file;
    auto& out = open_output(file, pres_out);
    out << "plan,property,preservation\n";
    for (auto property : properties) {
      for (bool refined : {false, true}) {
        double total = 0.0;
        for (int gi = 0; gi < ds.size(); ++gi) {
          const auto& g = ds.graphs[gi];
          auto plan = refined
                          ? cogl::refined_drop_plan(g, cogl::vertex_importance_prob(g, property),
                                                    pres_p_dr, pres_eps, f_kind)
                          : cogl::uniform_drop_plan(g, pres_p_dr);
          total += cogl::preservation_ratio(g, plan, property, pres_samples,
                                            cogl::mix(pres_data.seed, gi, refined ? 1 : 0));
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s,%s,%.4f", refined ? "refined" : "uniform",
                      cogl::to_string(property), total / ds.size());
        out << buf << "\n";
      }
    }
    return 0;
  }

  if (synth->parsed()) {
    auto ds = cogl::generate_synthetic(synth_kind, synth_n, synth_seed);
    cogl::save_tu_dataset(ds, synth_out);
    std::cout << "wrote " << ds.size() << " graphs to " << synth_out << "/" << ds.name << "_*\n";
    return 0;
  }

  if (pipeline->parsed()) {
    auto cfg = cogl::parse_config(pipe_config);
    if (!pipe_out.empty()) cfg.out_dir = pipe_out;
    if (pipe_jobs > 0) cfg.jobs = pipe_jobs;
    if (pipe_have_seed) cfg.seed = pipe_seed;
    auto report = cogl::run_pipeline(cfg);
    std::cout << "probe accuracy " << report.evaluation.mean_accuracy << " +/- "
              << report.evaluation.std_accuracy << " (outputs under " << report.out_dir.string()
              << ")\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cogl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(cogl::ExitCode::Other);
  }
}
