#include "cogl/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "cogl/error.hpp"
#include "cogl/rng.hpp"

namespace cogl {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

const char* to_string(OptimizerKind o) { return o == OptimizerKind::Sgd ? "sgd" : "adam"; }

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "adam") return OptimizerKind::Adam;
  throw ArgumentError("unknown optimizer '" + s + "' (expected sgd|adam)");
}

ParamLayout::ParamLayout(int layer_count, int hidden_dim, int feature_dim, int substructure_dim)
    : layer_count_(layer_count),
      hidden_dim_(hidden_dim),
      feature_dim_(feature_dim),
      substructure_dim_(substructure_dim) {
  if (layer_count < 1 || hidden_dim < 1 || feature_dim < 1 || substructure_dim < 0)
    throw ArgumentError("ParamLayout: dimensions must be positive");
  auto push = [&](int rows, int cols) {
    slots_.push_back({total_, rows, cols});
    total_ += rows * cols;
  };
  for (int l = 0; l < layer_count; ++l) {
    push(layer_input_dim(l), hidden_dim);  // w1
    push(hidden_dim, 1);                   // b1
    push(hidden_dim, hidden_dim);          // w2
    push(hidden_dim, 1);                   // b2
    push(1, 1);                            // gin eps
  }
  push(hidden_dim, hidden_dim);  // proj w1
  push(hidden_dim, 1);           // proj b1
  push(hidden_dim, hidden_dim);  // proj w2
  push(hidden_dim, 1);           // proj b2
}

int ParamLayout::layer_input_dim(int layer) const {
  return (layer == 0 ? feature_dim_ : hidden_dim_) + substructure_dim_;
}

ParamLayout::Slot ParamLayout::w1(int l) const { return slots_.at(l * 5 + 0); }
ParamLayout::Slot ParamLayout::b1(int l) const { return slots_.at(l * 5 + 1); }
ParamLayout::Slot ParamLayout::w2(int l) const { return slots_.at(l * 5 + 2); }
ParamLayout::Slot ParamLayout::b2(int l) const { return slots_.at(l * 5 + 3); }
ParamLayout::Slot ParamLayout::gin_eps(int l) const { return slots_.at(l * 5 + 4); }
ParamLayout::Slot ParamLayout::proj_w1() const { return slots_.at(layer_count_ * 5 + 0); }
ParamLayout::Slot ParamLayout::proj_b1() const { return slots_.at(layer_count_ * 5 + 1); }
ParamLayout::Slot ParamLayout::proj_w2() const { return slots_.at(layer_count_ * 5 + 2); }
ParamLayout::Slot ParamLayout::proj_b2() const { return slots_.at(layer_count_ * 5 + 3); }

namespace {

ConstMapMat view(const Eigen::VectorXd& flat, ParamLayout::Slot s) {
  return ConstMapMat(flat.data() + s.offset, s.rows, s.cols);
}

MapMat view(Eigen::VectorXd& flat, ParamLayout::Slot s) {
  return MapMat(flat.data() + s.offset, s.rows, s.cols);
}

}  // namespace

EncoderState init_state(const EncoderConfig& cfg, int feature_dim, int substructure_dim) {
  if (feature_dim < 1) throw ArgumentError("init_state: feature_dim must be >= 1");
  if (cfg.use_ogsn && substructure_dim < 1)
    throw ArgumentError("init_state: substructure features need substructure_dim >= 1");

  EncoderState st;
  st.layout = ParamLayout(cfg.layer_count, cfg.hidden_dim, feature_dim,
                          cfg.use_ogsn ? substructure_dim : 0);
  st.params = Eigen::VectorXd::Zero(st.layout.total());
  st.adam_m = Eigen::VectorXd::Zero(st.layout.total());
  st.adam_v = Eigen::VectorXd::Zero(st.layout.total());

  RngStream stream(mix(cfg.seed, 0x1217u));
  auto fill_uniform = [&](ParamLayout::Slot s, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    auto m = view(st.params, s);
    for (int r = 0; r < s.rows; ++r)
      for (int c = 0; c < s.cols; ++c) m(r, c) = (2.0 * stream.next_double() - 1.0) * bound;
  };
  for (int l = 0; l < cfg.layer_count; ++l) {
    fill_uniform(st.layout.w1(l), st.layout.layer_input_dim(l));
    fill_uniform(st.layout.w2(l), cfg.hidden_dim);
    view(st.params, st.layout.gin_eps(l))(0, 0) = cfg.gin_eps;
  }
  fill_uniform(st.layout.proj_w1(), cfg.hidden_dim);
  fill_uniform(st.layout.proj_w2(), cfg.hidden_dim);
  return st;
}

namespace {

constexpr char kStateMagic[8] = {'C', 'O', 'G', 'L', 'S', 'T', '0', '1'};

}  // namespace

void save_state(const EncoderState& st, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write state file " + file.string());
  out.write(kStateMagic, sizeof(kStateMagic));
  std::int64_t header[6] = {st.layout.layer_count(),   st.layout.hidden_dim(),
                            st.layout.feature_dim(),   st.layout.substructure_dim(),
                            st.step,                   st.layout.total()};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  auto dump = [&](const Eigen::VectorXd& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(sizeof(double) * v.size()));
  };
  dump(st.params);
  dump(st.adam_m);
  dump(st.adam_v);
  if (!out.good()) throw IoError("failed writing state file " + file.string());
}

EncoderState load_state(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open state file " + file.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in.good() || std::memcmp(magic, kStateMagic, sizeof(magic)) != 0)
    throw FormatError("not a state file: " + file.string());
  std::int64_t header[6];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in.good()) throw FormatError("truncated state header: " + file.string());

  EncoderState st;
  st.layout = ParamLayout(static_cast<int>(header[0]), static_cast<int>(header[1]),
                          static_cast<int>(header[2]), static_cast<int>(header[3]));
  st.step = header[4];
  if (st.layout.total() != header[5])
    throw FormatError("state header is inconsistent: " + file.string());
  auto slurp = [&](Eigen::VectorXd& v) {
    v.resize(st.layout.total());
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(sizeof(double) * v.size()));
  };
  slurp(st.params);
  slurp(st.adam_m);
  slurp(st.adam_v);
  if (!in.good()) throw FormatError("truncated state file: " + file.string());
  return st;
}

namespace {

// Per-view forward activations kept for the backward pass.
struct Trace {
  std::vector<Eigen::MatrixXd> xin;  // per layer, input after concat
  std::vector<Eigen::MatrixXd> m;    // per layer, (1+eps)*xin + neighbor sum
  std::vector<Eigen::MatrixXd> a1;   // per layer, pre-activation of MLP layer 1
  std::vector<Eigen::MatrixXd> a2;   // per layer, pre-activation of MLP layer 2
  std::vector<std::pair<int, int>> edges;
  Eigen::VectorXd readout;
  Eigen::VectorXd proj_pre;  // pre-activation of projection layer 1
  Eigen::VectorXd proj_hidden;
  Eigen::VectorXd z;
};

Eigen::MatrixXd neighbor_sum(const std::vector<std::pair<int, int>>& edges,
                             const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (const auto& [u, v] : edges) {
    out.row(u) += x.row(v);
    out.row(v) += x.row(u);
  }
  return out;
}

Trace forward(const Graph& g, const Eigen::MatrixXd* substructure, const EncoderState& st) {
  const auto& layout = st.layout;
  const bool ogsn = layout.substructure_dim() > 0;
  if (ogsn) {
    if (substructure == nullptr)
      throw ArgumentError("encode: state expects substructure features");
    if (substructure->rows() != g.node_count || substructure->cols() != layout.substructure_dim())
      throw ArgumentError("encode: substructure features do not cover the graph");
  } else if (substructure != nullptr) {
    throw ArgumentError("encode: state was built without substructure features");
  }

  Eigen::MatrixXd x = effective_features(g);
  if (x.cols() != layout.feature_dim())
    throw ArgumentError("encode: feature dim " + std::to_string(x.cols()) +
                        " != encoder feature dim " + std::to_string(layout.feature_dim()));

  Trace t;
  t.edges = g.edges;
  const int layers = layout.layer_count();
  t.xin.resize(layers);
  t.m.resize(layers);
  t.a1.resize(layers);
  t.a2.resize(layers);
  for (int l = 0; l < layers; ++l) {
    if (ogsn) {
      t.xin[l].resize(x.rows(), x.cols() + substructure->cols());
      t.xin[l] << x, *substructure;
    } else {
      t.xin[l] = x;
    }
    const double eps = view(st.params, layout.gin_eps(l))(0, 0);
    t.m[l] = (1.0 + eps) * t.xin[l] + neighbor_sum(t.edges, t.xin[l]);
    t.a1[l] = (t.m[l] * view(st.params, layout.w1(l))).rowwise() +
              view(st.params, layout.b1(l)).col(0).transpose();
    Eigen::MatrixXd h1 = t.a1[l].array().tanh();
    t.a2[l] = (h1 * view(st.params, layout.w2(l))).rowwise() +
              view(st.params, layout.b2(l)).col(0).transpose();
    x = t.a2[l].array().tanh();
  }
  t.readout = x.colwise().sum().transpose();
  t.proj_pre = view(st.params, layout.proj_w1()) * t.readout + view(st.params, layout.proj_b1()).col(0);
  t.proj_hidden = t.proj_pre.array().tanh();
  t.z = view(st.params, layout.proj_w2()) * t.proj_hidden + view(st.params, layout.proj_b2()).col(0);
  return t;
}

// Accumulates dLoss/dParams for one view given dLoss/dz.
void backward(const Trace& t, const EncoderState& st, const Eigen::VectorXd& dz,
              Eigen::VectorXd& grad) {
  const auto& layout = st.layout;
  const int layers = layout.layer_count();

  view(grad, layout.proj_w2()) += dz * t.proj_hidden.transpose();
  view(grad, layout.proj_b2()).col(0) += dz;
  Eigen::VectorXd dhidden = view(st.params, layout.proj_w2()).transpose() * dz;
  Eigen::VectorXd dpre = dhidden.array() * (1.0 - t.proj_hidden.array().square());
  view(grad, layout.proj_w1()) += dpre * t.readout.transpose();
  view(grad, layout.proj_b1()).col(0) += dpre;
  Eigen::VectorXd dreadout = view(st.params, layout.proj_w1()).transpose() * dpre;

  const int n = static_cast<int>(t.xin[0].rows());
  Eigen::MatrixXd dx = dreadout.transpose().replicate(n, 1);

  for (int l = layers - 1; l >= 0; --l) {
    Eigen::MatrixXd out = t.a2[l].array().tanh();
    Eigen::MatrixXd da2 = dx.array() * (1.0 - out.array().square());
    Eigen::MatrixXd h1 = t.a1[l].array().tanh();
    view(grad, layout.w2(l)) += h1.transpose() * da2;
    view(grad, layout.b2(l)).col(0) += da2.colwise().sum().transpose();
    Eigen::MatrixXd dh1_post = da2 * view(st.params, layout.w2(l)).transpose();
    Eigen::MatrixXd da1 = dh1_post.array() * (1.0 - h1.array().square());
    view(grad, layout.w1(l)) += t.m[l].transpose() * da1;
    view(grad, layout.b1(l)).col(0) += da1.colwise().sum().transpose();
    Eigen::MatrixXd dm = da1 * view(st.params, layout.w1(l)).transpose();

    const double eps = view(st.params, layout.gin_eps(l))(0, 0);
    view(grad, layout.gin_eps(l))(0, 0) += (dm.array() * t.xin[l].array()).sum();
    Eigen::MatrixXd dxin = (1.0 + eps) * dm + neighbor_sum(t.edges, dm);
    dx = dxin.leftCols(l == 0 ? layout.feature_dim() : layout.hidden_dim());
  }
}

}  // namespace

Eigen::VectorXd encode(const Graph& g, const Eigen::MatrixXd* substructure,
                       const EncoderState& st) {
  return forward(g, substructure, st).readout;
}

NtXentResult ntxent_loss(const Eigen::MatrixXd& anchors, const Eigen::MatrixXd& positives,
                         double tau) {
  const Eigen::Index n = anchors.rows();
  if (n < 2 || positives.rows() != n || positives.cols() != anchors.cols())
    throw ArgumentError("ntxent_loss: need matching anchor/positive batches of size >= 2");
  if (!(tau > 0.0)) throw ArgumentError("ntxent_loss: tau must be > 0");

  Eigen::VectorXd norm_a = anchors.rowwise().norm();
  Eigen::VectorXd norm_b = positives.rowwise().norm();
  if (norm_a.minCoeff() <= 0.0 || norm_b.minCoeff() <= 0.0)
    throw ArgumentError("ntxent_loss: zero-norm embedding");

  Eigen::MatrixXd a_hat = norm_a.cwiseInverse().asDiagonal() * anchors;
  Eigen::MatrixXd b_hat = norm_b.cwiseInverse().asDiagonal() * positives;
  Eigen::MatrixXd sim = a_hat * b_hat.transpose();  // n x n cosine similarities

  // Row-wise softmax over sim/tau with the stable shift.
  Eigen::MatrixXd logits = sim / tau;
  Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
  Eigen::MatrixXd shifted = (logits.colwise() - row_max).array().exp();
  Eigen::VectorXd denom = shifted.rowwise().sum();

  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    loss += -logits(i, i) + row_max[i] + std::log(denom[i]);
  loss /= static_cast<double>(n);

  Eigen::MatrixXd softmax = denom.cwiseInverse().asDiagonal() * shifted;
  Eigen::MatrixXd g = (softmax - Eigen::MatrixXd::Identity(n, n)) / (tau * static_cast<double>(n));

  // d sim_ij / d a_i = (b_hat_j - sim_ij * a_hat_i) / |a_i|, and symmetrically for b_j.
  Eigen::VectorXd row_gs = (g.array() * sim.array()).rowwise().sum();
  Eigen::VectorXd col_gs = (g.array() * sim.array()).colwise().sum().transpose();

  NtXentResult out;
  out.loss = loss;
  out.grad_anchors =
      norm_a.cwiseInverse().asDiagonal() * (g * b_hat - row_gs.asDiagonal() * a_hat);
  out.grad_positives =
      norm_b.cwiseInverse().asDiagonal() * (g.transpose() * a_hat - col_gs.asDiagonal() * b_hat);
  return out;
}

double batch_loss(const EncoderState& st, double tau, std::span<const EncodeInput> anchors,
                  std::span<const EncodeInput> positives, Eigen::VectorXd* grad_out) {
  if (anchors.size() != positives.size() || anchors.size() < 2)
    throw ArgumentError("batch_loss: need matching view batches of size >= 2");
  const int n = static_cast<int>(anchors.size());
  const int h = st.layout.hidden_dim();

  std::vector<Trace> trace_a(n), trace_b(n);
  Eigen::MatrixXd za(n, h), zb(n, h);
  for (int i = 0; i < n; ++i) {
    const auto& a = anchors[i];
    const auto& b = positives[i];
    trace_a[i] = forward(a.graph, a.substructure ? &*a.substructure : nullptr, st);
    trace_b[i] = forward(b.graph, b.substructure ? &*b.substructure : nullptr, st);
    za.row(i) = trace_a[i].z.transpose();
    zb.row(i) = trace_b[i].z.transpose();
  }

  auto nt = ntxent_loss(za, zb, tau);
  if (grad_out != nullptr) {
    grad_out->setZero(st.layout.total());
    for (int i = 0; i < n; ++i) backward(trace_a[i], st, nt.grad_anchors.row(i).transpose(), *grad_out);
    for (int i = 0; i < n; ++i)
      backward(trace_b[i], st, nt.grad_positives.row(i).transpose(), *grad_out);
  }
  return nt.loss;
}

double gradcheck(const EncoderState& st, std::span<const EncodeInput> anchors,
                 std::span<const EncodeInput> positives, double tau) {
  Eigen::VectorXd analytic;
  batch_loss(st, tau, anchors, positives, &analytic);

  EncoderState probe = st;
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < st.layout.total(); ++i) {
    const double saved = probe.params[i];
    probe.params[i] = saved + h;
    double up = batch_loss(probe, tau, anchors, positives, nullptr);
    probe.params[i] = saved - h;
    double down = batch_loss(probe, tau, anchors, positives, nullptr);
    probe.params[i] = saved;
    const double fd = (up - down) / (2.0 * h);
    const double rel =
        std::abs(analytic[i] - fd) / std::max({1e-6, std::abs(analytic[i]), std::abs(fd)});
    worst = std::max(worst, rel);
  }
  return worst;
}

namespace {

void optimizer_step(EncoderState& st, const Eigen::VectorXd& grad, const EncoderConfig& cfg) {
  Eigen::VectorXd update = grad;
  if (!cfg.gin_eps_learnable)
    for (int l = 0; l < st.layout.layer_count(); ++l) update[st.layout.gin_eps(l).offset] = 0.0;

  ++st.step;
  if (cfg.optimizer == OptimizerKind::Sgd) {
    st.params -= cfg.learning_rate * update;
    return;
  }
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  st.adam_m = beta1 * st.adam_m + (1.0 - beta1) * update;
  st.adam_v = beta2 * st.adam_v + (1.0 - beta2) * update.cwiseProduct(update);
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(st.step));
  st.params -= (cfg.learning_rate / bc1) *
               (st.adam_m.array() / ((st.adam_v.array() / bc2).sqrt() + eps)).matrix();
}

}  // namespace

TrainedEncoder train_contrastive(const GraphDataset& ds, const EncoderConfig& cfg,
                                 CohesionProperty property, double eps, DecayKind f_kind,
                                 double p_dr,
                                 const std::vector<SubstructureFeatures>* ogsn) {
  if (ds.size() < 2) throw ArgumentError("train_contrastive: need at least 2 graphs to contrast");
  if (cfg.batch_size < 2) throw ArgumentError("train_contrastive: batch_size must be >= 2");
  if (cfg.epochs < 1) throw ArgumentError("train_contrastive: epochs must be >= 1");
  if (cfg.use_ogsn && ogsn == nullptr)
    throw ArgumentError("train_contrastive: use_ogsn is on but no substructure features given");

  const int feature_dim = static_cast<int>(effective_features(ds.graphs[0]).cols());
  const int sub_dim = cfg.use_ogsn ? static_cast<int>((*ogsn)[0].values.cols()) : 0;
  const std::uint64_t run_seed = mix(cfg.seed, static_cast<std::uint64_t>(property) + 101);

  EncoderConfig seeded = cfg;
  seeded.seed = run_seed;
  TrainedEncoder out;
  out.state = init_state(seeded, feature_dim, sub_dim);

  std::vector<DropPlan> plans(ds.size());
  for (int gi = 0; gi < ds.size(); ++gi)
    plans[gi] = refined_drop_plan(ds.graphs[gi], vertex_importance_prob(ds.graphs[gi], property),
                                  p_dr, eps, f_kind);

  std::vector<int> order(ds.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    RngStream shuffle(mix(run_seed, 0x5u, static_cast<std::uint64_t>(epoch)));
    for (int i = ds.size() - 1; i > 0; --i)
      std::swap(order[i], order[shuffle.next_below(static_cast<std::uint64_t>(i + 1))]);

    for (int start = 0; start < ds.size(); start += cfg.batch_size) {
      const int count = std::min(cfg.batch_size, ds.size() - start);
      if (count < 2) continue;  // NT-Xent needs at least one negative

      std::vector<EncodeInput> anchors(count), positives(count);
      for (int i = 0; i < count; ++i) {
        const int gi = order[start + i];
        for (int side = 0; side < 2; ++side) {
          const std::uint64_t draw = mix(run_seed, static_cast<std::uint64_t>(gi),
                                         static_cast<std::uint64_t>(epoch) * 2 + side);
          auto sampled = sample_node_drop(ds.graphs[gi], plans[gi], draw);
          EncodeInput& input = side == 0 ? anchors[i] : positives[i];
          if (cfg.use_ogsn) {
            const auto& full = (*ogsn)[gi].values;
            Eigen::MatrixXd rows(sampled.graph.node_count, full.cols());
            for (int v = 0; v < sampled.graph.node_count; ++v)
              rows.row(v) = full.row(sampled.origin[v]);
            input.substructure = std::move(rows);
          }
          input.graph = std::move(sampled.graph);
        }
      }

      Eigen::VectorXd grad;
      double loss = batch_loss(out.state, cfg.tau, anchors, positives, &grad);
      optimizer_step(out.state, grad, cfg);
      if (!out.state.params.allFinite())
        throw DivergedError("train_contrastive: non-finite parameters", out.state.step);
      out.loss_history.push_back(loss);
    }
  }
  return out;
}

std::vector<TrainedEncoder> train_per_property(const GraphDataset& ds, const EncoderConfig& cfg,
                                               std::span<const CohesionProperty> properties,
                                               double eps, DecayKind f_kind, double p_dr,
                                               const std::vector<SubstructureFeatures>* ogsn) {
  if (properties.empty()) throw ArgumentError("train_per_property: empty property list");
  std::vector<TrainedEncoder> out;
  out.reserve(properties.size());
  for (auto property : properties)
    out.push_back(train_contrastive(ds, cfg, property, eps, f_kind, p_dr, ogsn));
  return out;
}

Eigen::VectorXd fuse_embeddings(std::span<const Eigen::VectorXd> parts) {
  if (parts.empty()) throw ArgumentError("fuse_embeddings: empty input");
  Eigen::Index total = 0;
  for (const auto& p : parts) {
    if (!p.allFinite()) throw ArgumentError("fuse_embeddings: non-finite embedding");
    total += p.size();
  }
  Eigen::VectorXd fused(total);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    fused.segment(at, p.size()) = p;
    at += p.size();
  }
  return fused;
}

}  // namespace cogl
