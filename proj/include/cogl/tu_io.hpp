#pragma once

#include <filesystem>
#include <iosfwd>

#include "cogl/graph.hpp"

namespace cogl {

/// Loads a TU-format dataset from `directory`. Expects `<name>_A.txt`,
/// `<name>_graph_indicator.txt` and `<name>_graph_labels.txt`; picks up
/// `<name>_node_labels.txt` when present (one-hot encoded into features).
/// File indices are 1-based; per-graph node numbering is compacted to
/// [0, n_i). Edges listed in both directions collapse to one undirected
/// edge. Graphs without node labels get a constant feature 1.0.
GraphDataset load_tu_dataset(const std::filesystem::path& directory, const std::string& name);

/// Writes the dataset back in TU format (edges listed in both directions).
void save_tu_dataset(const GraphDataset& ds, const std::filesystem::path& directory);

/// Native plain-text graph format: first line `n m`, then m lines
/// `u v [w]` with 0-based endpoints.
Graph read_graph_text(std::istream& in);
Graph read_graph_text_file(const std::filesystem::path& file);
void write_graph_text(const Graph& g, std::ostream& out);
void write_graph_text_file(const Graph& g, const std::filesystem::path& file);

}  // namespace cogl
