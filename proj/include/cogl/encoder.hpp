#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "cogl/augment.hpp"
#include "cogl/cohesion.hpp"
#include "cogl/graph.hpp"
#include "cogl/substructure.hpp"

namespace cogl {

enum class OptimizerKind { Sgd, Adam };

const char* to_string(OptimizerKind o);
OptimizerKind optimizer_from_string(const std::string& s);

struct EncoderConfig {
  int layer_count = 3;
  int hidden_dim = 32;
  bool use_ogsn = true;
  double tau = 0.5;
  int epochs = 20;
  int batch_size = 16;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::Adam;
  std::uint64_t seed = 7;
  double gin_eps = 0.0;
  bool gin_eps_learnable = false;
};

/// Offsets into the flat parameter vector. Per layer: W1 (in x hidden),
/// b1, W2 (hidden x hidden), b2, gin epsilon; then the two projection-head
/// layers. Matrices are stored row-major.
class ParamLayout {
public:
  struct Slot {
    int offset = 0;
    int rows = 0;
    int cols = 0;
    int size() const { return rows * cols; }
  };

  ParamLayout() = default;
  ParamLayout(int layer_count, int hidden_dim, int feature_dim, int substructure_dim);

  int layer_count() const { return layer_count_; }
  int hidden_dim() const { return hidden_dim_; }
  int feature_dim() const { return feature_dim_; }
  int substructure_dim() const { return substructure_dim_; }
  int layer_input_dim(int layer) const;
  int total() const { return total_; }

  Slot w1(int layer) const;
  Slot b1(int layer) const;
  Slot w2(int layer) const;
  Slot b2(int layer) const;
  Slot gin_eps(int layer) const;
  Slot proj_w1() const;
  Slot proj_b1() const;
  Slot proj_w2() const;
  Slot proj_b2() const;

private:
  int layer_count_ = 0;
  int hidden_dim_ = 0;
  int feature_dim_ = 0;
  int substructure_dim_ = 0;
  int total_ = 0;
  std::vector<Slot> slots_;  // 5 per layer, then the 4 projection slots
};

/// All trainable parameters plus optimizer moments. The substructure_dim
/// field is nonzero exactly when the encoder consumes original-graph
/// substructure features.
struct EncoderState {
  ParamLayout layout;
  Eigen::VectorXd params;
  Eigen::VectorXd adam_m;
  Eigen::VectorXd adam_v;
  long step = 0;
};

EncoderState init_state(const EncoderConfig& cfg, int feature_dim, int substructure_dim);

void save_state(const EncoderState& st, const std::filesystem::path& file);
EncoderState load_state(const std::filesystem::path& file);

/// Sum-pooled embedding of the final layer's node states (pre-projection).
/// `substructure` must cover every node of g when the state was built with
/// substructure features, and must be null otherwise.
Eigen::VectorXd encode(const Graph& g, const Eigen::MatrixXd* substructure,
                       const EncoderState& st);

struct NtXentResult {
  double loss = 0.0;
  Eigen::MatrixXd grad_anchors;
  Eigen::MatrixXd grad_positives;
};

/// In-batch contrastive loss over cosine similarities: anchor i's positive
/// is row i of `positives`; the other positives act as negatives. Returns
/// the mean per-anchor loss and exact gradients w.r.t. both embedding sets.
NtXentResult ntxent_loss(const Eigen::MatrixXd& anchors, const Eigen::MatrixXd& positives,
                         double tau);

/// One view to encode: a graph plus its (already survivor-mapped)
/// substructure feature rows when the encoder expects them.
struct EncodeInput {
  Graph graph;
  std::optional<Eigen::MatrixXd> substructure;
};

/// Loss of a batch of view pairs through encoder + projection head +
/// NT-Xent. If grad_out is non-null it receives dLoss/dParams (exact,
/// reverse-mode), accumulated anchors-first in index order.
double batch_loss(const EncoderState& st, double tau, std::span<const EncodeInput> anchors,
                  std::span<const EncodeInput> positives, Eigen::VectorXd* grad_out);

/// Max relative error between the analytic parameter gradient of
/// batch_loss and central finite differences (step 1e-5).
double gradcheck(const EncoderState& st, std::span<const EncodeInput> anchors,
                 std::span<const EncodeInput> positives, double tau);

struct TrainedEncoder {
  EncoderState state;
  std::vector<double> loss_history;  // one entry per optimizer step
};

/// Contrastive training for one cohesion property: two refined node-drop
/// views per graph per epoch, substructure features carried from the original
/// graphs when provided. Deterministic for fixed (dataset, cfg, seed).
TrainedEncoder train_contrastive(const GraphDataset& ds, const EncoderConfig& cfg,
                                 CohesionProperty property, double eps, DecayKind f_kind,
                                 double p_dr,
                                 const std::vector<SubstructureFeatures>* ogsn);

/// One encoder per property, seeded independently from cfg.seed.
std::vector<TrainedEncoder> train_per_property(const GraphDataset& ds, const EncoderConfig& cfg,
                                               std::span<const CohesionProperty> properties,
                                               double eps, DecayKind f_kind, double p_dr,
                                               const std::vector<SubstructureFeatures>* ogsn);

/// Concatenation in the given order (callers fix core before truss).
Eigen::VectorXd fuse_embeddings(std::span<const Eigen::VectorXd> parts);

}  // namespace cogl
