// Command-line front end for the brainaug pipeline.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "brainaug/commands.hpp"
#include "brainaug/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace brainaug;
  namespace fs = std::filesystem;

  CLI::App app{"Brain-network generation and augmentation pipeline"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  bool skip_bad = false;
  app.add_option("--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--skip-bad", skip_bad, "skip subjects that fail validation instead of aborting");

  auto* preprocess = app.add_subcommand("preprocess", "time series -> binary connectomes");
  std::string manifest;
  preprocess->add_option("--manifest", manifest, "subject manifest CSV (default: io.manifest)");

  app.add_subcommand("synth", "write a synthetic two-population graph cohort");

  auto* train_gen = app.add_subcommand("train-gen", "train one generator per class");
  std::string train_cohort;
  std::string class_filter = "both";
  train_gen->add_option("--cohort", train_cohort, "graph cohort directory (default: io.cohort_dir)");
  train_gen->add_option("--class", class_filter, "autism, control or both")
      ->check(CLI::IsMember({"autism", "control", "both"}));

  auto* sample_cmd = app.add_subcommand("sample", "sample graphs from a trained generator");
  std::string checkpoint;
  std::size_t count = 0;
  sample_cmd->add_option("--checkpoint", checkpoint, "generator checkpoint")->required();
  sample_cmd->add_option("--count", count, "number of accepted graphs (default: sampling.count_per_class)");

  app.add_subcommand("experiment", "run the raw / generated / mixed augmentation protocol");

  auto* metrics_cmd = app.add_subcommand("metrics", "graph statistics and degree MMD");
  std::string metrics_cohort;
  std::string against;
  metrics_cmd->add_option("--cohort", metrics_cohort, "graph cohort directory")->required();
  metrics_cmd->add_option("--against", against, "second cohort for MMD comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    ExperimentConfig config;
    config.generator = default_cli_generator();
    if (!config_path.empty()) config = load_experiment_config(config_path);
    if (seed) config.seed = *seed;

    CommandContext ctx;
    ctx.out = out_dir;
    ctx.skip_bad = skip_bad;
    ctx.log = &std::cerr;

    if (preprocess->parsed()) {
      const std::string path = manifest.empty() ? config.io.manifest : manifest;
      if (path.empty()) throw ValidationError("preprocess: no manifest given (--manifest or io.manifest)");
      const auto variants = cmd_preprocess(config, path, ctx);
      for (const auto& [dir, rows] : variants) {
        std::cout << (ctx.out / dir).lexically_normal().string() << ": " << rows.size() << " subjects\n";
      }
    } else if (app.got_subcommand("synth")) {
      const SynthReport rep = cmd_synth(config, ctx);
      std::cout << rep.graphs << " graphs, linear probe accuracy " << format_number(rep.probe_accuracy) << '\n';
    } else if (train_gen->parsed()) {
      const std::string dir = train_cohort.empty() ? config.io.cohort_dir : train_cohort;
      if (dir.empty()) throw ValidationError("train-gen: no cohort given (--cohort or io.cohort_dir)");
      std::vector<Label> classes;
      if (class_filter != "control") classes.push_back(Label::autism);
      if (class_filter != "autism") classes.push_back(Label::control);
      for (const auto& p : cmd_train_gen(config, dir, classes, ctx)) std::cout << p.string() << '\n';
    } else if (sample_cmd->parsed()) {
      const std::size_t n = count > 0 ? count : config.sampling.count_per_class;
      const SampleReport rep = cmd_sample(checkpoint, n, config.seed, ctx);
      std::cout << rep.accepted << " accepted, " << rep.rejected << " rejected\n";
    } else if (app.got_subcommand("experiment")) {
      for (const auto& cell : cmd_experiment(config, ctx)) {
        double acc = 0.0;
        for (double a : cell.accuracy) acc += a;
        std::cout << to_string(cell.arm) << " ratio " << format_number(cell.ratio) << " mean accuracy "
                  << format_number(acc / static_cast<double>(cell.accuracy.size())) << '\n';
      }
    } else if (metrics_cmd->parsed()) {
      std::optional<fs::path> other;
      if (!against.empty()) other = fs::path(against);
      cmd_metrics(config, metrics_cohort, other, ctx);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
