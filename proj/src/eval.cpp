#include "cogl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cogl/error.hpp"
#include "cogl/rng.hpp"

namespace cogl {

FoldPlan kfold_splits(int n, int k, std::uint64_t seed) {
  if (k < 2) throw ArgumentError("kfold_splits: need at least 2 folds");
  if (k > n) throw ArgumentError("kfold_splits: more folds than samples");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  RngStream stream(mix(seed, 0xF01Du));
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[stream.next_below(static_cast<std::uint64_t>(i + 1))]);

  FoldPlan plan;
  plan.fold_count = k;
  plan.seed = seed;
  plan.assignments.assign(n, 0);
  // Contiguous chunks over the shuffled order; the first n % k folds get
  // the extra element.
  const int base = n / k, extra = n % k;
  int at = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    for (int i = 0; i < size; ++i) plan.assignments[order[at++]] = f;
  }
  return plan;
}

Metrics classification_metrics(std::span<const int> preds, std::span<const int> labels,
                               int class_count) {
  if (preds.size() != labels.size() || preds.empty())
    throw ArgumentError("classification_metrics: need matching nonempty preds/labels");
  std::vector<long> tp(class_count, 0), pred_count(class_count, 0), label_count(class_count, 0);
  long correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] < 0 || preds[i] >= class_count || labels[i] < 0 || labels[i] >= class_count)
      throw ArgumentError("classification_metrics: class id out of range");
    ++pred_count[preds[i]];
    ++label_count[labels[i]];
    if (preds[i] == labels[i]) {
      ++tp[preds[i]];
      ++correct;
    }
  }
  Metrics m;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(preds.size());
  for (int c = 0; c < class_count; ++c) {
    m.macro_precision += pred_count[c] > 0 ? static_cast<double>(tp[c]) / pred_count[c] : 0.0;
    m.macro_recall += label_count[c] > 0 ? static_cast<double>(tp[c]) / label_count[c] : 0.0;
  }
  m.macro_precision /= class_count;
  m.macro_recall /= class_count;
  return m;
}

namespace {

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
  Eigen::MatrixXd shifted = (logits.colwise() - row_max).array().exp();
  return shifted.array().colwise() / shifted.rowwise().sum().array();
}

}  // namespace

ProbeModel fit_probe(const Eigen::MatrixXd& x, std::span<const int> labels, int class_count,
                     double l2) {
  const Eigen::Index n = x.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n || n == 0)
    throw ArgumentError("fit_probe: labels do not match embeddings");
  if (l2 < 0) throw ArgumentError("fit_probe: l2 must be >= 0");

  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, class_count);
  for (Eigen::Index i = 0; i < n; ++i) y(i, labels[i]) = 1.0;

  ProbeModel model;
  model.l2 = l2;
  model.weights = Eigen::MatrixXd::Zero(class_count, x.cols());
  model.bias = Eigen::VectorXd::Zero(class_count);

  constexpr int kIterations = 500;
  constexpr double kLearningRate = 0.1;
  for (int it = 0; it < kIterations; ++it) {
    Eigen::MatrixXd logits = x * model.weights.transpose();
    logits.rowwise() += model.bias.transpose();
    Eigen::MatrixXd delta = (softmax_rows(logits) - y) / static_cast<double>(n);
    Eigen::MatrixXd grad_w = delta.transpose() * x + l2 * model.weights;
    Eigen::VectorXd grad_b = delta.colwise().sum().transpose();
    model.weights -= kLearningRate * grad_w;
    model.bias -= kLearningRate * grad_b;
  }
  return model;
}

std::vector<int> probe_predict(const ProbeModel& model, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd logits = x * model.weights.transpose();
  logits.rowwise() += model.bias.transpose();
  std::vector<int> preds(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best = 0;
    logits.row(i).maxCoeff(&best);
    preds[i] = static_cast<int>(best);
  }
  return preds;
}

ProbeEvaluation train_linear_probe(const Eigen::MatrixXd& embeddings, std::span<const int> labels,
                                   const FoldPlan& plan, double l2, std::uint64_t seed,
                                   int repeat_tag) {
  (void)seed;  // the zero-initialized full-batch fit is already deterministic
  const Eigen::Index n = embeddings.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n || n == 0)
    throw ArgumentError("train_linear_probe: labels do not match embeddings");
  if (static_cast<Eigen::Index>(plan.assignments.size()) != n)
    throw ArgumentError("train_linear_probe: fold plan does not match embeddings");
  if (!embeddings.allFinite()) throw ArgumentError("train_linear_probe: non-finite embeddings");
  const int class_count = *std::max_element(labels.begin(), labels.end()) + 1;

  ProbeEvaluation out;
  for (int fold = 0; fold < plan.fold_count; ++fold) {
    std::vector<int> train_idx, test_idx;
    for (Eigen::Index i = 0; i < n; ++i)
      (plan.assignments[i] == fold ? test_idx : train_idx).push_back(static_cast<int>(i));
    if (train_idx.empty() || test_idx.empty())
      throw DegenerateFoldError("train_linear_probe: empty fold " + std::to_string(fold));

    Eigen::MatrixXd x_train(train_idx.size(), embeddings.cols());
    std::vector<int> y_train(train_idx.size());
    std::set<int> train_classes;
    for (std::size_t i = 0; i < train_idx.size(); ++i) {
      x_train.row(i) = embeddings.row(train_idx[i]);
      y_train[i] = labels[train_idx[i]];
      train_classes.insert(y_train[i]);
    }
    if (train_classes.size() < 2)
      throw DegenerateFoldError("train_linear_probe: single-class training fold " +
                                std::to_string(fold));

    // Standardize on the training fold so the fixed-step fit is scale-free.
    Eigen::RowVectorXd mean = x_train.colwise().mean();
    Eigen::RowVectorXd stddev =
        ((x_train.rowwise() - mean).array().square().colwise().mean()).sqrt();
    for (Eigen::Index c = 0; c < stddev.size(); ++c)
      if (stddev[c] <= 0.0) stddev[c] = 1.0;
    x_train = (x_train.rowwise() - mean).array().rowwise() / stddev.array();

    auto model = fit_probe(x_train, y_train, class_count, l2);

    // Sanity floor: on its own training data the fit must match at least
    // what a constant majority predictor scores there.
    {
      auto train_preds = probe_predict(model, x_train);
      long correct = 0;
      std::vector<long> counts(class_count, 0);
      for (std::size_t i = 0; i < y_train.size(); ++i) {
        counts[y_train[i]]++;
        if (train_preds[i] == y_train[i]) ++correct;
      }
      const double majority =
          static_cast<double>(*std::max_element(counts.begin(), counts.end())) /
          static_cast<double>(y_train.size());
      const double train_acc = static_cast<double>(correct) / static_cast<double>(y_train.size());
      if (train_acc + 1e-9 < majority)
        throw Error(ExitCode::Other, "train_linear_probe: fit below the majority floor (" +
                                         std::to_string(train_acc) + " < " +
                                         std::to_string(majority) + ")");
    }

    Eigen::MatrixXd x_test(test_idx.size(), embeddings.cols());
    std::vector<int> y_test(test_idx.size());
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
      x_test.row(i) = embeddings.row(test_idx[i]);
      y_test[i] = labels[test_idx[i]];
    }
    x_test = (x_test.rowwise() - mean).array().rowwise() / stddev.array();
    auto preds = probe_predict(model, x_test);
    out.folds.push_back({fold, repeat_tag, classification_metrics(preds, y_test, class_count)});
  }

  double sum = 0.0, sum_sq = 0.0;
  for (const auto& f : out.folds) {
    sum += f.metrics.accuracy;
    sum_sq += f.metrics.accuracy * f.metrics.accuracy;
  }
  const double count = static_cast<double>(out.folds.size());
  out.mean_accuracy = sum / count;
  out.std_accuracy = std::sqrt(std::max(0.0, sum_sq / count - out.mean_accuracy * out.mean_accuracy));
  return out;
}

ProbeEvaluation repeated_probe(const Eigen::MatrixXd& embeddings, std::span<const int> labels,
                               int folds, int repeats, double l2, std::uint64_t seed) {
  if (repeats < 1) throw ArgumentError("repeated_probe: repeats must be >= 1");
  ProbeEvaluation pooled;
  for (int r = 0; r < repeats; ++r) {
    auto plan = kfold_splits(static_cast<int>(embeddings.rows()), folds,
                             mix(seed, static_cast<std::uint64_t>(r)));
    auto eval = train_linear_probe(embeddings, labels, plan, l2, seed, r);
    pooled.folds.insert(pooled.folds.end(), eval.folds.begin(), eval.folds.end());
  }
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& f : pooled.folds) {
    sum += f.metrics.accuracy;
    sum_sq += f.metrics.accuracy * f.metrics.accuracy;
  }
  const double count = static_cast<double>(pooled.folds.size());
  pooled.mean_accuracy = sum / count;
  pooled.std_accuracy =
      std::sqrt(std::max(0.0, sum_sq / count - pooled.mean_accuracy * pooled.mean_accuracy));
  return pooled;
}

ProbeEvaluation cohesion_baseline(const GraphDataset& ds, int K,
                                  std::span<const CohesionProperty> properties, int folds,
                                  int repeats, double l2, std::uint64_t seed) {
  if (ds.size() == 0) throw ArgumentError("cohesion_baseline: empty dataset");
  Eigen::MatrixXd features(ds.size(), K * static_cast<int>(properties.size()));
  for (int gi = 0; gi < ds.size(); ++gi)
    features.row(gi) = cohesion_feature_vector(ds.graphs[gi], K, properties).transpose();
  return repeated_probe(features, ds.labels, folds, repeats, l2, seed);
}

}  // namespace cogl
