#include "brainaug/discriminator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "brainaug/error.hpp"

namespace brainaug {

Vector featurize(const LabeledGraph& g) {
  const std::size_t n = g.node_count();
  Vector out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(g.has_edge(i, j) ? 1.0 : 0.0);
  }
  return out;
}

Vector featurize(const BinaryConnectome& g) {
  Vector out;
  out.reserve(g.n * (g.n - 1) / 2);
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = i + 1; j < g.n; ++j) out.push_back(g.at(i, j) != 0 ? 1.0 : 0.0);
  }
  return out;
}

std::vector<Example> make_examples(std::span<const LabeledGraph> graphs) {
  std::vector<Example> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) {
    if (g.label() == Label::unlabeled) throw ValidationError("classifier data must be labeled");
    out.push_back({featurize(g), g.label() == Label::autism ? 1.0 : 0.0});
  }
  return out;
}

void ClassifierConfig::validate() const {
  if (width < 1) throw ValidationError("classifier: width must be >= 1");
  if (blocks < 1) throw ValidationError("classifier: need at least one residual block");
  if (batch_size < 1) throw ValidationError("classifier: batch_size must be >= 1");
  if (!(lr > 0.0)) throw ValidationError("classifier: lr must be positive");
}

namespace {

MlpParams layer_stack(std::initializer_list<std::size_t> dims, std::initializer_list<Activation> acts) {
  const std::vector<std::size_t> d(dims);
  const std::vector<Activation> a(acts);
  return MlpParams::zeros(d, a);
}

}  // namespace

ClassifierParams ClassifierParams::zeros(const ClassifierConfig& c) {
  c.validate();
  if (c.input_dim < 1) throw ValidationError("classifier: input_dim must be >= 1");
  ClassifierParams p;
  p.input = layer_stack({c.input_dim, c.width}, {Activation::relu});
  for (std::size_t b = 0; b < c.blocks; ++b) {
    p.blocks.push_back(layer_stack({c.width, c.width, c.width}, {Activation::relu, Activation::relu}));
  }
  p.output = layer_stack({c.width, 1}, {Activation::sigmoid});
  return p;
}

ClassifierParams ClassifierParams::init(const ClassifierConfig& c, SeededRng& rng) {
  ClassifierParams p = zeros(c);
  p.input.init_xavier(rng);
  for (auto& b : p.blocks) b.init_xavier(rng);
  p.output.init_xavier(rng);
  return p;
}

TensorRefs ClassifierParams::tensors() {
  TensorRefs refs;
  auto add = [&](std::span<double> t) { refs.push_back(t); };
  input.visit(add);
  for (auto& b : blocks) b.visit(add);
  output.visit(add);
  return refs;
}

namespace {

struct ForwardCache {
  MlpCache input;
  std::vector<MlpCache> blocks;
  MlpCache output;
};

double forward(const ClassifierParams& p, std::span<const double> x, ForwardCache* cache) {
  Vector h = mlp_forward(p.input, x, cache ? &cache->input : nullptr);
  if (cache) cache->blocks.resize(p.blocks.size());
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const Vector r = mlp_forward(p.blocks[b], h, cache ? &cache->blocks[b] : nullptr);
    for (std::size_t k = 0; k < h.size(); ++k) h[k] += r[k];
  }
  return mlp_forward(p.output, h, cache ? &cache->output : nullptr)[0];
}

void backward(const ClassifierParams& p, const ForwardCache& cache, double dlogit, ClassifierParams& g) {
  Vector dh(p.output.input_dim(), 0.0);
  mlp_backward(p.output, cache.output, std::span<const double>(&dlogit, 1), g.output, dh, true);
  for (std::size_t b = p.blocks.size(); b-- > 0;) {
    Vector d_in = dh;  // identity skip
    mlp_backward(p.blocks[b], cache.blocks[b], dh, g.blocks[b], d_in);
    dh = std::move(d_in);
  }
  mlp_backward(p.input, cache.input, dh, g.input, {});
}

void check_both_classes(std::span<const Example> data, const char* what) {
  bool pos = false, neg = false;
  for (const auto& e : data) (e.y > 0.5 ? pos : neg) = true;
  if (!pos || !neg) throw ValidationError(std::string(what) + ": both classes must be present");
}

}  // namespace

double predict(const ClassifierParams& params, std::span<const double> x) { return forward(params, x, nullptr); }

ClassifierTrainResult train_classifier(const ClassifierConfig& config_in, std::span<const Example> train_set,
                                       SeededRng& rng) {
  if (train_set.empty()) throw ValidationError("train_classifier: empty training set");
  check_both_classes(train_set, "train_classifier");
  ClassifierConfig config = config_in;
  const std::size_t dim = train_set.front().x.size();
  if (config.input_dim == 0) config.input_dim = dim;
  for (const auto& e : train_set) {
    if (e.x.size() != config.input_dim) {
      throw ValidationError("train_classifier: feature length " + std::to_string(e.x.size()) +
                            " != input_dim " + std::to_string(config.input_dim));
    }
  }

  ClassifierTrainResult res;
  res.params = ClassifierParams::init(config, rng);
  ClassifierParams grads = ClassifierParams::zeros(config);
  const TensorRefs prefs = res.params.tensors();
  const TensorRefs grefs = grads.tensors();
  AdamState adam(AdamConfig{config.lr, 0.9, 0.999, 1e-8}, prefs);

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  ForwardCache cache;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
      const std::size_t e = std::min(order.size(), b + config.batch_size);
      const double scale = 1.0 / static_cast<double>(e - b);
      zero_tensors(grefs);
      for (std::size_t i = b; i < e; ++i) {
        const Example& ex = train_set[order[i]];
        const double prob = forward(res.params, ex.x, &cache);
        epoch_loss += bce_term(prob, ex.y);
        backward(res.params, cache, (prob - ex.y) * scale, grads);
      }
      clip_global_norm(grefs, config.grad_clip);
      adam.update(prefs, grefs);
    }
    epoch_loss /= static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss)) throw RuntimeFailure("train_classifier: non-finite loss");
    res.loss_curve.push_back(epoch_loss);
  }
  return res;
}

EvalReport evaluate_scores(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw ValidationError("evaluate: scores and labels must be non-empty and of equal length");
  }
  EvalReport rep;
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool actual = labels[i] > 0.5;
    const bool called = scores[i] >= 0.5;
    (actual ? pos : neg) += 1;
    if (actual && called) ++rep.confusion.true_positive;
    if (actual && !called) ++rep.confusion.false_negative;
    if (!actual && called) ++rep.confusion.false_positive;
    if (!actual && !called) ++rep.confusion.true_negative;
  }
  rep.accuracy = static_cast<double>(rep.confusion.true_positive + rep.confusion.true_negative) /
                 static_cast<double>(scores.size());
  if (pos == 0 || neg == 0) throw ValidationError("evaluate: both classes must be present for ROC/AUC");

  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  rep.roc_points.push_back({HUGE_VAL, 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  double area = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    const double s = scores[idx[i]];
    while (i < idx.size() && scores[idx[i]] == s) {
      (labels[idx[i]] > 0.5 ? tp : fp) += 1;
      ++i;
    }
    const RocPoint pt{s, static_cast<double>(fp) / static_cast<double>(neg),
                      static_cast<double>(tp) / static_cast<double>(pos)};
    const RocPoint& prev = rep.roc_points.back();
    area += (pt.fpr - prev.fpr) * (pt.tpr + prev.tpr) * 0.5;
    rep.roc_points.push_back(pt);
  }
  rep.auc = area;
  return rep;
}

EvalReport evaluate(const ClassifierParams& params, std::span<const Example> test_set) {
  Vector scores, labels;
  scores.reserve(test_set.size());
  labels.reserve(test_set.size());
  for (const auto& e : test_set) {
    scores.push_back(predict(params, e.x));
    labels.push_back(e.y);
  }
  return evaluate_scores(scores, labels);
}

double linear_probe_accuracy(std::span<const Example> train_set, std::span<const Example> test_set) {
  check_both_classes(train_set, "linear_probe_accuracy");
  if (test_set.empty()) throw ValidationError("linear_probe_accuracy: empty test set");
  const std::size_t dim = train_set.front().x.size();
  Vector mu_pos(dim, 0.0), mu_neg(dim, 0.0);
  double n_pos = 0.0, n_neg = 0.0;
  for (const auto& e : train_set) {
    Vector& mu = e.y > 0.5 ? mu_pos : mu_neg;
    (e.y > 0.5 ? n_pos : n_neg) += 1.0;
    for (std::size_t k = 0; k < dim; ++k) mu[k] += e.x[k];
  }
  for (std::size_t k = 0; k < dim; ++k) {
    mu_pos[k] /= n_pos;
    mu_neg[k] /= n_neg;
  }
  Vector w(dim);
  for (std::size_t k = 0; k < dim; ++k) w[k] = mu_pos[k] - mu_neg[k];
  const double bias = 0.5 * (dot(mu_pos, mu_pos) - dot(mu_neg, mu_neg));
  std::size_t correct = 0;
  for (const auto& e : test_set) {
    const bool called = dot(w, e.x) > bias;
    correct += (called == (e.y > 0.5)) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(test_set.size());
}

std::string_view to_string(Arm arm) {
  switch (arm) {
    case Arm::raw: return "raw";
    case Arm::generated: return "generated";
    case Arm::mixed: return "mixed";
  }
  return "raw";
}

Arm arm_from_string(std::string_view s) {
  if (s == "raw") return Arm::raw;
  if (s == "generated") return Arm::generated;
  if (s == "mixed") return Arm::mixed;
  throw ValidationError("unknown arm '" + std::string(s) + "'");
}

bool is_unstable_ratio(double ratio) { return ratio <= 0.15 || ratio >= 0.85; }

ProtocolResult run_augmentation_protocol(std::span<const LabeledGraph> raw, std::span<const LabeledGraph> generated,
                                         const ClassifierConfig& config, double ratio, SeededRng& rng,
                                         std::span<const Arm> arms) {
  if (raw.empty()) throw ValidationError("protocol: raw cohort is empty");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ValidationError("protocol: ratio must lie in (0, 1)");
  const bool needs_generated = std::any_of(arms.begin(), arms.end(), [](Arm a) { return a != Arm::raw; });
  if (needs_generated && generated.empty()) throw ValidationError("protocol: generated cohort is empty");
  const std::size_t n = raw.front().node_count();
  for (auto set : {raw, generated}) {
    for (const auto& g : set) {
      if (g.node_count() != n) throw ValidationError("protocol: all graphs must have the same node count");
    }
  }

  const std::uint64_t base = rng.next_u64();
  ProtocolResult res;
  res.ratio = ratio;

  SeededRng split_rng(derive_seed(base, "split"));
  for (Label cls : {Label::autism, Label::control}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i].label() == cls) members.push_back(i);
    }
    split_rng.shuffle(std::span<std::size_t>(members));
    const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(members.size())));
    if (n_train == 0 || n_train >= members.size()) {
      throw ValidationError("protocol: ratio " + std::to_string(ratio) + " leaves class '" +
                            std::string(to_string(cls)) + "' empty in the train or test split");
    }
    res.train_indices.insert(res.train_indices.end(), members.begin(), members.begin() + static_cast<long>(n_train));
    res.test_indices.insert(res.test_indices.end(), members.begin() + static_cast<long>(n_train), members.end());
  }
  std::sort(res.train_indices.begin(), res.train_indices.end());
  std::sort(res.test_indices.begin(), res.test_indices.end());

  std::vector<Example> raw_train, test;
  for (std::size_t i : res.train_indices) raw_train.push_back({featurize(raw[i]), raw[i].label() == Label::autism ? 1.0 : 0.0});
  for (std::size_t i : res.test_indices) test.push_back({featurize(raw[i]), raw[i].label() == Label::autism ? 1.0 : 0.0});
  const std::vector<Example> gen = needs_generated ? make_examples(generated) : std::vector<Example>{};

  for (std::size_t a = 0; a < arms.size(); ++a) {
    std::vector<Example> train_set;
    switch (arms[a]) {
      case Arm::raw: train_set = raw_train; break;
      case Arm::generated: train_set = gen; break;
      case Arm::mixed: {
        train_set = raw_train;
        train_set.insert(train_set.end(), gen.begin(), gen.end());
        SeededRng mix_rng(derive_seed(base, "mix"));
        mix_rng.shuffle(std::span<Example>(train_set));
        break;
      }
    }
    SeededRng train_rng(derive_seed(base, to_string(arms[a])));
    const auto trained = train_classifier(config, train_set, train_rng);
    res.arms.push_back({arms[a], evaluate(trained.params, test), train_set.size()});
  }
  return res;
}

std::vector<SweepRow> ratio_sweep(std::span<const LabeledGraph> raw, std::span<const LabeledGraph> generated,
                                  std::span<const double> ratios, const ClassifierConfig& config, SeededRng& rng,
                                  std::span<const Arm> arms) {
  const SeededRng start = rng;
  std::vector<SweepRow> rows;
  for (double ratio : ratios) {
    SeededRng r = start;
    const ProtocolResult res = run_augmentation_protocol(raw, generated, config, ratio, r, arms);
    for (const auto& arm : res.arms) {
      rows.push_back({ratio, arm.arm, arm.report.accuracy, arm.report.auc, is_unstable_ratio(ratio)});
    }
  }
  rng.next_u64();
  return rows;
}

}  // namespace brainaug
