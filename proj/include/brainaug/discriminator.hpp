#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "brainaug/connectome.hpp"
#include "brainaug/graph.hpp"
#include "brainaug/kernels.hpp"

namespace brainaug {

// Strict upper triangle, row-major, as 0/1 doubles: length n(n-1)/2.
Vector featurize(const LabeledGraph& g);
Vector featurize(const BinaryConnectome& g);

struct Example {
  Vector x;
  double y = 0.0;  // 1 = autism, 0 = control
};

std::vector<Example> make_examples(std::span<const LabeledGraph> graphs);

struct ClassifierConfig {
  std::size_t input_dim = 0;  // 0: taken from the training data
  std::size_t width = 64;
  std::size_t blocks = 2;
  std::size_t epochs = 60;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  double grad_clip = 5.0;

  void validate() const;
  friend bool operator==(const ClassifierConfig&, const ClassifierConfig&) = default;
};

// input projection -> residual blocks x + relu(W2 relu(W1 x + b1) + b2)
// -> sigmoid probability of the autism class.
struct ClassifierParams {
  MlpParams input;
  std::vector<MlpParams> blocks;
  MlpParams output;

  static ClassifierParams init(const ClassifierConfig& config, SeededRng& rng);
  static ClassifierParams zeros(const ClassifierConfig& config);
  TensorRefs tensors();
};

double predict(const ClassifierParams& params, std::span<const double> x);

struct ClassifierTrainResult {
  ClassifierParams params;
  std::vector<double> loss_curve;
};

// Minibatch Adam on the mean binary cross-entropy. Throws ValidationError
// when the training set lacks one of the classes.
ClassifierTrainResult train_classifier(const ClassifierConfig& config, std::span<const Example> train_set,
                                       SeededRng& rng);

struct RocPoint {
  double threshold = 0.0;  // scores >= threshold are called positive
  double fpr = 0.0;
  double tpr = 0.0;
};

struct ConfusionMatrix {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t true_negative = 0;
  std::size_t false_negative = 0;
  std::size_t total() const { return true_positive + false_positive + true_negative + false_negative; }
};

struct EvalReport {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::vector<RocPoint> roc_points;
  double auc = 0.0;
};

// Accuracy at a 0.5 cutoff, ROC over all distinct scores, trapezoidal AUC.
// labels are 1 (positive) / 0. Both classes must be present.
EvalReport evaluate_scores(std::span<const double> scores, std::span<const double> labels);
EvalReport evaluate(const ClassifierParams& params, std::span<const Example> test_set);

// Nearest-class-centroid linear classifier; held-out accuracy.
double linear_probe_accuracy(std::span<const Example> train_set, std::span<const Example> test_set);

enum class Arm { raw, generated, mixed };
std::string_view to_string(Arm arm);
Arm arm_from_string(std::string_view s);
inline constexpr Arm kAllArms[] = {Arm::raw, Arm::generated, Arm::mixed};

struct ArmResult {
  Arm arm = Arm::raw;
  EvalReport report;
  std::size_t train_size = 0;
};

struct ProtocolResult {
  double ratio = 0.0;
  std::vector<std::size_t> train_indices;  // into the raw cohort
  std::vector<std::size_t> test_indices;   // into the raw cohort, shared by all arms
  std::vector<ArmResult> arms;
};

// Stratified split of the raw cohort; each requested arm trains a fresh
// classifier (raw train split / whole generated cohort / both, shuffled)
// and is evaluated on the same raw test split.
ProtocolResult run_augmentation_protocol(std::span<const LabeledGraph> raw, std::span<const LabeledGraph> generated,
                                         const ClassifierConfig& config, double ratio, SeededRng& rng,
                                         std::span<const Arm> arms = kAllArms);

struct SweepRow {
  double ratio = 0.0;
  Arm arm = Arm::raw;
  double accuracy = 0.0;
  double auc = 0.0;
  bool unstable = false;  // very small or very large training share
};

// Every ratio is run from the same rng state, so a single-ratio sweep equals
// run_augmentation_protocol with that rng.
std::vector<SweepRow> ratio_sweep(std::span<const LabeledGraph> raw, std::span<const LabeledGraph> generated,
                                  std::span<const double> ratios, const ClassifierConfig& config, SeededRng& rng,
                                  std::span<const Arm> arms = kAllArms);

bool is_unstable_ratio(double ratio);

}  // namespace brainaug
