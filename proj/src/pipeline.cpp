#include "cogl/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "cogl/error.hpp"
#include "cogl/parallel.hpp"
#include "cogl/rng.hpp"
#include "cogl/tu_io.hpp"

namespace cogl {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ParseError("config: bad number for " + key + ": '" + value + "'");
  }
}

long long parse_int(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("config: bad integer for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ParseError("config: bad flag for " + key + ": '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

double default_eps_for_dataset(const std::string& name) {
  static const std::map<std::string, double> grid = {
      {"imdb-b", 0.2},   {"imdb-binary", 0.2}, {"imdb-m", 0.4}, {"imdb-multi", 0.4},
      {"collab", 0.2},   {"rdt-b", 0.4},       {"reddit-binary", 0.4},
      {"rdt-t", 0.2},    {"enzymes", 0.4},     {"proteins", 0.8}};
  auto it = grid.find(lower(name));
  return it == grid.end() ? 0.2 : it->second;
}

double default_eta_for_dataset(const std::string& name) {
  static const std::map<std::string, double> grid = {
      {"imdb-b", 0.4},  {"imdb-binary", 0.4}, {"imdb-m", 0.4}, {"imdb-multi", 0.4},
      {"collab", 0.2},  {"enzymes", 0.6},     {"proteins", 0.8}};
  auto it = grid.find(lower(name));
  return it == grid.end() ? 0.4 : it->second;
}

double PipelineConfig::resolved_eps() const {
  return eps >= 0.0 ? eps : default_eps_for_dataset(dataset_name);
}

double PipelineConfig::resolved_eta() const {
  return eta >= 0.0 ? eta : default_eta_for_dataset(dataset_name);
}

PipelineConfig parse_config_text(const std::string& text, const std::string& origin) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(origin + ":" + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = section + "." + trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (key == "dataset.kind") cfg.dataset_kind = value;
    else if (key == "dataset.path") cfg.dataset_path = value;
    else if (key == "dataset.name") cfg.dataset_name = value;
    else if (key == "dataset.synthetic_kind") cfg.synthetic_kind = value;
    else if (key == "dataset.n_graphs") cfg.synthetic_graphs = static_cast<int>(parse_int(value, key));
    else if (key == "dataset.features") {
      if (value == "constant") cfg.features = FeatureKind::Constant;
      else if (value == "degree") cfg.features = FeatureKind::DegreeOneHot;
      else throw ParseError("config: features must be constant|degree, got '" + value + "'");
    } else if (key == "augment.properties") {
      cfg.properties.clear();
      for (const auto& item : split_list(value))
        cfg.properties.push_back(cohesion_property_from_string(item));
      if (cfg.properties.empty()) throw ParseError("config: properties must be nonempty");
    } else if (key == "augment.eps") {
      cfg.eps = value == "auto" ? -1.0 : parse_double(value, key);
    } else if (key == "augment.f") cfg.f_kind = decay_kind_from_string(value);
    else if (key == "augment.p_dr") cfg.p_dr = parse_double(value, key);
    else if (key == "augment.eta") cfg.eta = value == "auto" ? -1.0 : parse_double(value, key);
    else if (key == "augment.alpha") cfg.alpha = parse_double(value, key);
    else if (key == "substructure.sizes") {
      cfg.substructure.clique_sizes.clear();
      for (const auto& item : split_list(value))
        cfg.substructure.clique_sizes.push_back(static_cast<int>(parse_int(item, key)));
    } else if (key == "substructure.normalization")
      cfg.substructure.normalization = substructure_norm_from_string(value);
    else if (key == "substructure.ogsn") cfg.use_ogsn = parse_bool(value, key);
    else if (key == "encoder.layers") cfg.encoder.layer_count = static_cast<int>(parse_int(value, key));
    else if (key == "encoder.hidden") cfg.encoder.hidden_dim = static_cast<int>(parse_int(value, key));
    else if (key == "encoder.tau") cfg.encoder.tau = parse_double(value, key);
    else if (key == "encoder.epochs") cfg.encoder.epochs = static_cast<int>(parse_int(value, key));
    else if (key == "encoder.batch") cfg.encoder.batch_size = static_cast<int>(parse_int(value, key));
    else if (key == "encoder.lr") cfg.encoder.learning_rate = parse_double(value, key);
    else if (key == "encoder.optimizer") cfg.encoder.optimizer = optimizer_from_string(value);
    else if (key == "encoder.gin_eps") cfg.encoder.gin_eps = parse_double(value, key);
    else if (key == "encoder.gin_eps_learnable") cfg.encoder.gin_eps_learnable = parse_bool(value, key);
    else if (key == "eval.folds") cfg.folds = static_cast<int>(parse_int(value, key));
    else if (key == "eval.repeats") cfg.repeats = static_cast<int>(parse_int(value, key));
    else if (key == "eval.l2") cfg.l2 = parse_double(value, key);
    else if (key == "run.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "run.out") cfg.out_dir = value;
    else if (key == "run.jobs") cfg.jobs = static_cast<int>(parse_int(value, key));
    else throw ParseError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return cfg;
}

PipelineConfig parse_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open config " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), file.filename().string());
}

std::string render_config(const PipelineConfig& cfg) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "[dataset]\n";
  out << "kind = " << cfg.dataset_kind << "\n";
  if (!cfg.dataset_path.empty()) out << "path = " << cfg.dataset_path << "\n";
  out << "name = " << cfg.dataset_name << "\n";
  out << "synthetic_kind = " << cfg.synthetic_kind << "\n";
  out << "n_graphs = " << cfg.synthetic_graphs << "\n";
  out << "features = " << (cfg.features == FeatureKind::Constant ? "constant" : "degree") << "\n";
  out << "\n[augment]\n";
  out << "properties = ";
  for (std::size_t i = 0; i < cfg.properties.size(); ++i)
    out << (i ? "," : "") << to_string(cfg.properties[i]);
  out << "\n";
  out << "eps = " << num(cfg.resolved_eps()) << "\n";
  out << "f = " << to_string(cfg.f_kind) << "\n";
  out << "p_dr = " << num(cfg.p_dr) << "\n";
  out << "eta = " << num(cfg.resolved_eta()) << "\n";
  out << "alpha = " << num(cfg.alpha) << "\n";
  out << "\n[substructure]\n";
  out << "sizes = ";
  for (std::size_t i = 0; i < cfg.substructure.clique_sizes.size(); ++i)
    out << (i ? "," : "") << cfg.substructure.clique_sizes[i];
  out << "\n";
  out << "normalization = " << to_string(cfg.substructure.normalization) << "\n";
  out << "ogsn = " << (cfg.use_ogsn ? "on" : "off") << "\n";
  out << "\n[encoder]\n";
  out << "layers = " << cfg.encoder.layer_count << "\n";
  out << "hidden = " << cfg.encoder.hidden_dim << "\n";
  out << "tau = " << num(cfg.encoder.tau) << "\n";
  out << "epochs = " << cfg.encoder.epochs << "\n";
  out << "batch = " << cfg.encoder.batch_size << "\n";
  out << "lr = " << num(cfg.encoder.learning_rate) << "\n";
  out << "optimizer = " << to_string(cfg.encoder.optimizer) << "\n";
  out << "gin_eps = " << num(cfg.encoder.gin_eps) << "\n";
  out << "gin_eps_learnable = " << (cfg.encoder.gin_eps_learnable ? "on" : "off") << "\n";
  out << "\n[eval]\n";
  out << "folds = " << cfg.folds << "\n";
  out << "repeats = " << cfg.repeats << "\n";
  out << "l2 = " << num(cfg.l2) << "\n";
  out << "\n[run]\n";
  out << "seed = " << cfg.seed << "\n";
  out << "out = " << cfg.out_dir << "\n";
  out << "jobs = " << cfg.jobs << "\n";
  return out.str();
}

namespace {

// Exactly `m` distinct non-edges drawn as a seeded shuffle prefix of all
// node pairs.
std::vector<std::pair<int, int>> sample_edge_set(int n, int m, RngStream& stream) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  for (std::size_t i = pairs.size() - 1; i > 0; --i)
    std::swap(pairs[i], pairs[stream.next_below(i + 1)]);
  pairs.resize(std::min<std::size_t>(m, pairs.size()));
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

Graph random_background(int n, double p, RngStream& stream) {
  Graph g;
  g.node_count = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (stream.next_double() < p) g.edges.emplace_back(u, v);
  g.edge_weights.assign(g.edges.size(), 1.0);
  return g;
}

}  // namespace

GraphDataset generate_synthetic(const std::string& kind, int n_graphs, std::uint64_t seed) {
  if (n_graphs < 2 || n_graphs % 2 != 0)
    throw ArgumentError("generate_synthetic: n_graphs must be even and >= 2");
  if (kind != "planted-clique" && kind != "two-density")
    throw ArgumentError("generate_synthetic: unknown kind '" + kind + "'");

  GraphDataset ds;
  ds.name = kind;
  ds.class_count = 2;
  ds.label_values = {0, 1};
  ds.graphs.resize(n_graphs);
  ds.labels.resize(n_graphs);

  for (int pair = 0; pair < n_graphs / 2; ++pair) {
    RngStream stream(mix(seed, 0x5E7u, static_cast<std::uint64_t>(pair)));
    const int n = 16 + static_cast<int>(stream.next_below(9));  // 16..24 nodes

    Graph positive, negative;
    if (kind == "planted-clique") {
      const int clique = 5 + static_cast<int>(stream.next_below(3));  // 5..7
      positive = random_background(n, 0.12, stream);
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      for (int i = n - 1; i > 0; --i)
        std::swap(order[i], order[stream.next_below(static_cast<std::uint64_t>(i + 1))]);
      std::set<std::pair<int, int>> edge_set(positive.edges.begin(), positive.edges.end());
      for (int i = 0; i < clique; ++i)
        for (int j = i + 1; j < clique; ++j)
          edge_set.insert(std::minmax(order[i], order[j]));
      positive.edges.assign(edge_set.begin(), edge_set.end());
      positive.edge_weights.assign(positive.edges.size(), 1.0);

      // The negative twin matches the edge count without the planted clique.
      negative.node_count = n;
      negative.edges = sample_edge_set(n, positive.edge_count(), stream);
      negative.edge_weights.assign(negative.edges.size(), 1.0);
    } else {  // two-density
      negative = random_background(n, 0.10, stream);
      positive = random_background(n, 0.18, stream);
    }
    positive.node_features = Eigen::MatrixXd::Ones(n, 1);
    negative.node_features = Eigen::MatrixXd::Ones(n, 1);

    ds.graphs[2 * pair] = std::move(negative);
    ds.labels[2 * pair] = 0;
    ds.graphs[2 * pair + 1] = std::move(positive);
    ds.labels[2 * pair + 1] = 1;
  }
  return ds;
}

namespace {

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return std::string(buf);
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << content;
  if (!out.good()) throw IoError("failed writing " + file.string());
}

std::filesystem::path cache_directory(const PipelineConfig& cfg) {
  if (const char* env = std::getenv("COGL_CACHE_DIR"); env != nullptr && *env != '\0')
    return std::filesystem::path(env);
  return std::filesystem::path(cfg.out_dir) / "cache";
}

}  // namespace

PipelineReport run_pipeline(const PipelineConfig& cfg) {
  const std::filesystem::path out_dir(cfg.out_dir);
  std::filesystem::create_directories(out_dir);

  std::string stage = "setup";
  auto fail_manifest = [&](const std::string& what) {
    std::ostringstream m;
    m << "# status = failed\n# stage = " << stage << "\n# error = " << what << "\n\n"
      << render_config(cfg);
    std::ofstream out(out_dir / "manifest.txt");
    if (out) out << m.str();
  };

  try {
    stage = "load";
    GraphDataset ds;
    if (cfg.dataset_kind == "synthetic") {
      ds = generate_synthetic(cfg.synthetic_kind, cfg.synthetic_graphs, cfg.seed);
      ds.name = cfg.dataset_name.empty() ? cfg.synthetic_kind : cfg.dataset_name;
    } else if (cfg.dataset_kind == "tu") {
      ds = load_tu_dataset(cfg.dataset_path, cfg.dataset_name);
    } else {
      throw ArgumentError("dataset kind must be synthetic|tu, got '" + cfg.dataset_kind + "'");
    }
    if (cfg.features == FeatureKind::DegreeOneHot) ds = with_degree_features(std::move(ds));

    stage = "decompose";
    double avg_core_kmax = 0.0, avg_truss_kmax = 0.0;
    for (const auto& g : ds.graphs) {
      avg_core_kmax += core_numbers(g).k_max;
      avg_truss_kmax += g.edge_count() > 0 ? truss_numbers(g).k_max : 0;
    }
    avg_core_kmax /= ds.size();
    avg_truss_kmax /= ds.size();

    stage = "features";
    std::vector<SubstructureFeatures> ogsn;
    if (cfg.use_ogsn) ogsn = ogsn_features(ds, cfg.substructure, cache_directory(cfg), cfg.jobs);

    stage = "train";
    EncoderConfig encoder_cfg = cfg.encoder;
    encoder_cfg.use_ogsn = cfg.use_ogsn;
    encoder_cfg.seed = cfg.seed;
    auto trained = train_per_property(ds, encoder_cfg, cfg.properties, cfg.resolved_eps(),
                                      cfg.f_kind, cfg.p_dr, cfg.use_ogsn ? &ogsn : nullptr);

    stage = "fuse";
    PipelineReport report;
    report.out_dir = out_dir;
    const int dim = encoder_cfg.hidden_dim * static_cast<int>(cfg.properties.size());
    report.embeddings.resize(ds.size(), dim);
    for (int gi = 0; gi < ds.size(); ++gi) {
      std::vector<Eigen::VectorXd> parts;
      parts.reserve(trained.size());
      for (const auto& enc : trained)
        parts.push_back(encode(ds.graphs[gi], cfg.use_ogsn ? &ogsn[gi].values : nullptr,
                               enc.state));
      report.embeddings.row(gi) = fuse_embeddings(parts).transpose();
    }
    for (const auto& enc : trained) report.loss_history.push_back(enc.loss_history);

    stage = "evaluate";
    report.evaluation =
        repeated_probe(report.embeddings, ds.labels, cfg.folds, cfg.repeats, cfg.l2, cfg.seed);

    stage = "write";
    {
      std::ostringstream metrics;
      metrics << "fold,repeat,accuracy,precision,recall\n";
      double mp = 0.0, mr = 0.0;
      for (const auto& f : report.evaluation.folds) {
        metrics << f.fold << "," << f.repeat << "," << format_fixed(f.metrics.accuracy, 6) << ","
                << format_fixed(f.metrics.macro_precision, 6) << ","
                << format_fixed(f.metrics.macro_recall, 6) << "\n";
        mp += f.metrics.macro_precision;
        mr += f.metrics.macro_recall;
      }
      const double count = static_cast<double>(report.evaluation.folds.size());
      metrics << "mean,all," << format_fixed(report.evaluation.mean_accuracy, 6) << ","
              << format_fixed(mp / count, 6) << "," << format_fixed(mr / count, 6) << "\n";
      metrics << "std,all," << format_fixed(report.evaluation.std_accuracy, 6) << ",,\n";
      write_text_file(out_dir / "metrics.csv", metrics.str());
    }
    {
      std::ostringstream emb;
      emb << "graph";
      for (int c = 0; c < report.embeddings.cols(); ++c) emb << ",e" << c;
      emb << "\n";
      char buf[64];
      for (int gi = 0; gi < ds.size(); ++gi) {
        emb << gi;
        for (int c = 0; c < report.embeddings.cols(); ++c) {
          std::snprintf(buf, sizeof(buf), "%.17g", report.embeddings(gi, c));
          emb << "," << buf;
        }
        emb << "\n";
      }
      write_text_file(out_dir / "embeddings.csv", emb.str());
    }
    {
      std::ostringstream labels;
      for (int label : ds.labels) labels << label << "\n";
      write_text_file(out_dir / "labels.csv", labels.str());
    }
    for (std::size_t pi = 0; pi < cfg.properties.size(); ++pi) {
      const std::string prop = to_string(cfg.properties[pi]);
      save_state(trained[pi].state, out_dir / ("state." + prop + ".bin"));
      std::ostringstream loss;
      loss << "step,loss\n";
      char buf[64];
      for (std::size_t s = 0; s < trained[pi].loss_history.size(); ++s) {
        std::snprintf(buf, sizeof(buf), "%.17g", trained[pi].loss_history[s]);
        loss << s << "," << buf << "\n";
      }
      write_text_file(out_dir / ("loss." + prop + ".csv"), loss.str());
    }
    {
      std::ostringstream manifest;
      manifest << "# cogl 0.1.0\n# status = complete\n";
      manifest << "# dataset = " << ds.name << " graphs=" << ds.size()
               << " classes=" << ds.class_count << "\n";
      manifest << "# avg_kmax_core = " << format_fixed(avg_core_kmax, 3)
               << " avg_kmax_truss = " << format_fixed(avg_truss_kmax, 3) << "\n";
      manifest << "# probe_accuracy = " << format_fixed(report.evaluation.mean_accuracy, 6)
               << " +/- " << format_fixed(report.evaluation.std_accuracy, 6) << "\n\n";
      manifest << render_config(cfg);
      write_text_file(out_dir / "manifest.txt", manifest.str());
    }
    return report;
  } catch (const Error& e) {
    fail_manifest(e.what());
    throw Error(e.code(), stage + ": " + e.what());
  } catch (const std::exception& e) {
    fail_manifest(e.what());
    throw Error(ExitCode::Other, stage + ": " + e.what());
  }
}

}  // namespace cogl
