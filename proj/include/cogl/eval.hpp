#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "cogl/cohesion.hpp"
#include "cogl/graph.hpp"

namespace cogl {

struct FoldPlan {
  int fold_count = 10;
  std::vector<int> assignments;  // graph index -> fold id
  std::uint64_t seed = 0;
};

/// Seeded shuffle then contiguous chunking; fold sizes differ by at most 1.
FoldPlan kfold_splits(int n, int k, std::uint64_t seed);

struct Metrics {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
};

/// Standard definitions; classes absent from both predictions and labels
/// contribute precision/recall 0.
Metrics classification_metrics(std::span<const int> preds, std::span<const int> labels,
                               int class_count);

/// Multinomial logistic regression with bias: class_count x dim weights
/// trained by full-batch gradient descent (500 iterations, lr 0.1, L2 on
/// the weights only). Deterministic: zero initialization.
struct ProbeModel {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
  double l2 = 0.0;
};

ProbeModel fit_probe(const Eigen::MatrixXd& x, std::span<const int> labels, int class_count,
                     double l2);

std::vector<int> probe_predict(const ProbeModel& model, const Eigen::MatrixXd& x);

struct FoldResult {
  int fold = 0;
  int repeat = 0;
  Metrics metrics;
};

struct ProbeEvaluation {
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
};

/// Cross-validated linear probe on frozen embeddings (rows = graphs).
/// Throws DegenerateFoldError when some training fold is single-class.
ProbeEvaluation train_linear_probe(const Eigen::MatrixXd& embeddings, std::span<const int> labels,
                                   const FoldPlan& plan, double l2, std::uint64_t seed,
                                   int repeat_tag = 0);

/// train_linear_probe over `repeats` reseeded fold plans; results carry
/// their repeat index, summary is pooled over repeats x folds.
ProbeEvaluation repeated_probe(const Eigen::MatrixXd& embeddings, std::span<const int> labels,
                               int folds, int repeats, double l2, std::uint64_t seed);

/// Linear probe on the per-graph cohesion node-count features.
ProbeEvaluation cohesion_baseline(const GraphDataset& ds, int K,
                                  std::span<const CohesionProperty> properties, int folds,
                                  int repeats, double l2, std::uint64_t seed);

}  // namespace cogl
