#include "cogl/substructure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cogl/error.hpp"
#include "cogl/parallel.hpp"
#include "cogl/rng.hpp"

namespace cogl {

const char* to_string(SubstructureNorm n) {
  switch (n) {
    case SubstructureNorm::None: return "none";
    case SubstructureNorm::Log1p: return "log1p";
    case SubstructureNorm::MaxPerGraph: return "max-per-graph";
  }
  return "?";
}

SubstructureNorm substructure_norm_from_string(const std::string& s) {
  if (s == "none") return SubstructureNorm::None;
  if (s == "log1p") return SubstructureNorm::Log1p;
  if (s == "max-per-graph") return SubstructureNorm::MaxPerGraph;
  throw ArgumentError("unknown normalization '" + s + "' (expected none|log1p|max-per-graph)");
}

std::string SubstructureSpec::cache_tag() const {
  std::string tag = "cliques";
  for (std::size_t i = 0; i < clique_sizes.size(); ++i)
    tag += (i == 0 ? "_" : "-") + std::to_string(clique_sizes[i]);
  tag += std::string(".") + to_string(normalization);
  return tag;
}

namespace {

void validate_sizes(std::span<const int> sizes) {
  if (sizes.empty()) throw ArgumentError("clique sizes must be nonempty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 3) throw ArgumentError("clique sizes must be >= 3");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw ArgumentError("clique sizes must be ascending");
  }
}

// Extends the clique `stack` with candidates (all adjacent to every stack
// member and larger than the last member), bumping per-node counts whenever
// the stack size hits a requested clique size.
void extend_clique(const std::vector<std::vector<int>>& adj, std::span<const int> sizes,
                   int max_size, std::vector<int>& stack, const std::vector<int>& candidates,
                   Eigen::MatrixXd& counts) {
  for (int v : candidates) {
    stack.push_back(v);
    const int depth = static_cast<int>(stack.size());
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      if (sizes[j] == depth)
        for (int member : stack) counts(member, j) += 1.0;
    }
    if (depth < max_size) {
      std::vector<int> next;
      const auto& nv = adj[v];
      auto it = std::upper_bound(nv.begin(), nv.end(), v);
      std::set_intersection(it, nv.end(),
                            std::upper_bound(candidates.begin(), candidates.end(), v),
                            candidates.end(), std::back_inserter(next));
      if (!next.empty()) extend_clique(adj, sizes, max_size, stack, next, counts);
    }
    stack.pop_back();
  }
}

}  // namespace

SubstructureFeatures count_cliques_per_node(const Graph& g, std::span<const int> sizes) {
  validate_sizes(sizes);
  SubstructureFeatures out;
  out.values = Eigen::MatrixXd::Zero(g.node_count, static_cast<int>(sizes.size()));
  const int max_size = sizes.back();
  auto adj = adjacency_lists(g);
  std::vector<int> stack;
  for (int v = 0; v < g.node_count; ++v) {
    stack.push_back(v);
    std::vector<int> candidates(std::upper_bound(adj[v].begin(), adj[v].end(), v), adj[v].end());
    extend_clique(adj, sizes, max_size, stack, candidates, out.values);
    stack.pop_back();
  }
  return out;
}

void apply_normalization(SubstructureFeatures& features, SubstructureNorm norm) {
  switch (norm) {
    case SubstructureNorm::None:
      return;
    case SubstructureNorm::Log1p:
      features.values = features.values.array().log1p();
      return;
    case SubstructureNorm::MaxPerGraph:
      for (int c = 0; c < features.values.cols(); ++c) {
        double max = features.values.col(c).maxCoeff();
        if (max > 0) features.values.col(c) /= max;
      }
      return;
  }
}

namespace {

// Structural fingerprint so a cache entry can never be served for a
// different dataset that happens to share a name (re-seeded synthetic
// runs, edited TU files).
std::uint64_t dataset_fingerprint(const GraphDataset& ds) {
  std::uint64_t h = mix(0x0D5u, static_cast<std::uint64_t>(ds.size()));
  for (const auto& g : ds.graphs) {
    h = mix(h, static_cast<std::uint64_t>(g.node_count),
            static_cast<std::uint64_t>(g.edge_count()));
    for (const auto& [u, v] : g.edges)
      h = mix(h, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(v));
  }
  return h;
}

std::filesystem::path cache_file(const GraphDataset& ds, const SubstructureSpec& spec,
                                 const std::filesystem::path& cache_dir) {
  char tag[32];
  std::snprintf(tag, sizeof(tag), "%016llx",
                static_cast<unsigned long long>(dataset_fingerprint(ds)));
  return cache_dir / (ds.name + "." + spec.cache_tag() + "." + tag + ".csv");
}

bool load_cache(const GraphDataset& ds, const SubstructureSpec& spec,
                const std::filesystem::path& file, std::vector<SubstructureFeatures>& out) {
  std::ifstream in(file);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line)) return false;  // header
  out.clear();
  out.resize(ds.size());
  long long expected_rows = 0;
  for (int gi = 0; gi < ds.size(); ++gi) {
    out[gi].values = Eigen::MatrixXd::Zero(ds.graphs[gi].node_count, spec.dim());
    expected_rows += ds.graphs[gi].node_count;
  }
  long long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) return false;
    int gi = std::stoi(cell);
    if (!std::getline(row, cell, ',')) return false;
    int v = std::stoi(cell);
    if (gi < 0 || gi >= ds.size() || v < 0 || v >= ds.graphs[gi].node_count) return false;
    for (int c = 0; c < spec.dim(); ++c) {
      if (!std::getline(row, cell, ',')) return false;
      out[gi].values(v, c) = std::stod(cell);
    }
    ++rows;
  }
  return rows == expected_rows;
}

void store_cache(const GraphDataset& ds, const SubstructureSpec& spec,
                 const std::filesystem::path& file, const std::vector<SubstructureFeatures>& feats) {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("cannot write feature cache " + tmp.string());
    out << "graph,node";
    for (int size : spec.clique_sizes) out << ",c" << size;
    out << "\n";
    char buf[64];
    for (int gi = 0; gi < ds.size(); ++gi) {
      for (int v = 0; v < ds.graphs[gi].node_count; ++v) {
        out << gi << "," << v;
        for (int c = 0; c < spec.dim(); ++c) {
          std::snprintf(buf, sizeof(buf), "%.17g", feats[gi].values(v, c));
          out << "," << buf;
        }
        out << "\n";
      }
    }
    if (!out.good()) throw IoError("failed writing feature cache " + tmp.string());
  }
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw IoError("cannot move feature cache into place: " + ec.message());
}

}  // namespace

std::vector<SubstructureFeatures> ogsn_features(const GraphDataset& ds, const SubstructureSpec& spec,
                                                const std::filesystem::path& cache_dir, int jobs) {
  validate_sizes(spec.clique_sizes);
  std::vector<SubstructureFeatures> features;
  if (!cache_dir.empty() && load_cache(ds, spec, cache_file(ds, spec, cache_dir), features))
    return features;

  features.resize(ds.size());
  parallel_for(ds.size(), jobs, [&](int gi) {
    features[gi] = count_cliques_per_node(ds.graphs[gi], spec.clique_sizes);
    apply_normalization(features[gi], spec.normalization);
  });

  if (!cache_dir.empty()) store_cache(ds, spec, cache_file(ds, spec, cache_dir), features);
  return features;
}

}  // namespace cogl
