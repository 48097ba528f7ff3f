#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <vector>

#include "cogl/graph.hpp"

namespace cogl {

enum class SubstructureNorm { None, Log1p, MaxPerGraph };

const char* to_string(SubstructureNorm n);
SubstructureNorm substructure_norm_from_string(const std::string& s);

struct SubstructureSpec {
  std::vector<int> clique_sizes{3, 4, 5};  // sorted, each >= 3
  SubstructureNorm normalization = SubstructureNorm::Log1p;

  int dim() const { return static_cast<int>(clique_sizes.size()); }
  std::string cache_tag() const;
};

/// node x |clique_sizes| matrix; column j holds each node's membership
/// count (or its normalized value) for cliques of size clique_sizes[j].
struct SubstructureFeatures {
  Eigen::MatrixXd values;
};

/// Exact per-node clique occurrence counts via ordered backtracking over
/// neighbor intersections. Raw counts, no normalization.
SubstructureFeatures count_cliques_per_node(const Graph& g, std::span<const int> sizes);

/// Per-graph substructure features for the whole dataset, normalized per
/// `spec`. When cache_dir is non-empty the result is read from / written
/// to `<name>.<tag>.csv` there (atomic write).
std::vector<SubstructureFeatures> ogsn_features(const GraphDataset& ds, const SubstructureSpec& spec,
                                                const std::filesystem::path& cache_dir = {},
                                                int jobs = 1);

void apply_normalization(SubstructureFeatures& features, SubstructureNorm norm);

}  // namespace cogl
