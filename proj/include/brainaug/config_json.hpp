#pragma once

// JSON (de)serialization of configuration records. Parsing is strict:
// unknown keys are rejected, omitted keys keep their defaults.

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "brainaug/discriminator.hpp"
#include "brainaug/graphrnn.hpp"

namespace brainaug {

// Throws ValidationError naming the first key of `j` not in `allowed`.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                         std::string_view section);

nlohmann::json graphrnn_config_to_json(const GraphRnnConfig& c);
// A fixed_n generation block without "n" yields generation.n == 0, meaning
// "take n from the training cohort"; callers resolve it before validate().
GraphRnnConfig graphrnn_config_from_json(const nlohmann::json& j);

nlohmann::json classifier_config_to_json(const ClassifierConfig& c);
ClassifierConfig classifier_config_from_json(const nlohmann::json& j);

struct ThresholdRule {
  enum class Kind { fixed, otsu };
  Kind kind = Kind::fixed;
  double tau = 0.5;
  std::size_t bins = 256;
};

struct PreprocessConfig {
  bool gsr = false;
  bool bandpass = true;
  double low_hz = 0.01;
  double high_hz = 0.1;
  ThresholdRule threshold;
  bool reverse = false;
  bool upper_triangular = false;
  // "none", "pipeline" ({gsr} x {bandpass}) or "threshold" (0.3/0.5/0.7/otsu)
  std::string ablation = "none";
};

struct SynthClassConfig {
  double p_in = 0.8;
  double p_out = 0.1;
  double within_corr = 0.5;  // time-series synthesis only
};

struct SynthConfig {
  std::size_t n = 30;
  std::size_t blocks = 2;
  SynthClassConfig class_a{0.8, 0.1, 0.6};
  SynthClassConfig class_b{0.6, 0.3, 0.4};
  std::size_t count_per_class = 200;
  bool time_series = false;
  std::size_t n_timepoints = 200;
  double tr_seconds = 2.0;
};

struct IoConfig {
  std::string manifest;        // time-series manifest (preprocess)
  std::string cohort_dir;      // raw graph cohort; synthesized when empty
  std::string generated_dir;   // generated cohort; sampled from checkpoints or trained when empty
  std::string checkpoint_autism;
  std::string checkpoint_control;
};

struct SamplingConfig {
  std::size_t count_per_class = 200;
};

struct ProtocolConfig {
  std::vector<Arm> arms{Arm::raw, Arm::generated, Arm::mixed};
  std::vector<double> ratios{0.6};
  std::size_t repeats = 1;
};

// Generator defaults used by the CLI: n taken from the cohort.
GraphRnnConfig default_cli_generator();

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  std::uint64_t seed = 0;
  IoConfig io;
  PreprocessConfig preprocessing;
  SynthConfig synth;
  GraphRnnConfig generator = default_cli_generator();
  SamplingConfig sampling;
  ClassifierConfig classifier;
  ProtocolConfig protocol;
  double mmd_sigma = 1.0;
};


ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& c);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace brainaug
