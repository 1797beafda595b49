#pragma once

// Pipeline stages behind the command-line subcommands. Every stage writes
// its fully resolved configuration next to its outputs, derives its random
// streams from the master seed with derive_seed(seed, "<stage tag>"), and
// never modifies its inputs.
//
// Seed tags:
//   synth                  cohort synthesis
//   train-gen/<class>      generator initialization and training
//   sample/<class>         sampling generated graphs
//   protocol, repeat r     derive_seed(seed, "protocol", r)
//   probe                  separability check split

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brainaug/cohort.hpp"
#include "brainaug/config_json.hpp"
#include "brainaug/connectome.hpp"

namespace brainaug {

struct CommandContext {
  std::filesystem::path out = "out";
  bool skip_bad = false;
  std::ostream* log = nullptr;  // progress messages; nullptr = silent
};

// GSR -> band-pass -> Pearson -> threshold -> transforms, per the config.
BinaryConnectome preprocess_subject(const RoiTimeSeries& ts, const PreprocessConfig& config, Label label);

struct PreprocessSummaryRow {
  std::string subject_id;
  Label label = Label::unlabeled;
  std::size_t n = 0;
  std::size_t edges = 0;
  double threshold_used = 0.0;
};

// One output directory per ablation variant ("." when ablation is none).
// Returns the summary rows keyed by variant directory name.
std::vector<std::pair<std::string, std::vector<PreprocessSummaryRow>>> cmd_preprocess(
    const ExperimentConfig& config, const std::filesystem::path& manifest, const CommandContext& ctx);

struct SynthReport {
  std::size_t graphs = 0;
  double probe_accuracy = 0.0;
};
SynthReport cmd_synth(const ExperimentConfig& config, const CommandContext& ctx);

// Trains one generator per class; writes generator_<class>.json and
// loss_<class>.csv. Returns the checkpoint paths.
std::vector<std::filesystem::path> cmd_train_gen(const ExperimentConfig& config,
                                                 const std::filesystem::path& cohort_dir,
                                                 std::span<const Label> classes, const CommandContext& ctx);

struct SampleReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};
SampleReport cmd_sample(const std::filesystem::path& checkpoint, std::size_t count, std::uint64_t seed,
                        const CommandContext& ctx);

struct ExperimentCell {
  Arm arm = Arm::raw;
  double ratio = 0.0;
  std::vector<double> accuracy;  // one per repeat
  std::vector<double> auc;
};
std::vector<ExperimentCell> cmd_experiment(const ExperimentConfig& config, const CommandContext& ctx);

void cmd_metrics(const ExperimentConfig& config, const std::filesystem::path& cohort_dir,
                 const std::optional<std::filesystem::path>& against, const CommandContext& ctx);

GraphRnnConfig resolve_generator_config(const GraphRnnConfig& config, std::size_t cohort_nodes);

// Shortest round-trip decimal text; used for every number written to CSV.
std::string format_number(double v);

}  // namespace brainaug
