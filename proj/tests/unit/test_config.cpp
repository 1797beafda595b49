#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "brainaug/commands.hpp"
#include "brainaug/config_json.hpp"
#include "brainaug/error.hpp"

using namespace brainaug;
using nlohmann::json;

TEST_CASE("generator config round trip") {
  GraphRnnConfig c;
  c.variant = HeadVariant::mlp_head;
  c.ordering = TrainingOrder::identity;
  c.embed_dim = 5;
  c.lookback = 12;
  c.generation = GenerationMode::eos();
  c.lr = 0.0025;
  c.seed = 77;
  c.min_density = 0.05;
  CHECK(graphrnn_config_from_json(graphrnn_config_to_json(c)) == c);

  c.lookback = kUnboundedLookback;
  c.generation = GenerationMode::fixed(40);
  const auto j = graphrnn_config_to_json(c);
  CHECK(j["lookback"] == "unbounded");
  CHECK(graphrnn_config_from_json(j) == c);
}

TEST_CASE("generator config errors") {
  CHECK_THROWS_AS(graphrnn_config_from_json(json{{"hidden", 3}}), ValidationError);
  CHECK_THROWS_AS(graphrnn_config_from_json(json{{"variant", "lstm"}}), ValidationError);
  CHECK_THROWS_AS(graphrnn_config_from_json(json{{"ordering", "dfs"}}), ValidationError);
  CHECK_THROWS_AS(graphrnn_config_from_json(json{{"lookback", -3}}), ValidationError);
  CHECK_THROWS_AS(graphrnn_config_from_json(json{{"epochs", "many"}}), ValidationError);
  CHECK_THROWS_AS(graphrnn_config_from_json(json{{"generation", {{"mode", "eos"}, {"n", 4}}}}), ValidationError);
  CHECK_THROWS_AS(graphrnn_config_from_json(json::array()), ValidationError);
  try {
    graphrnn_config_from_json(json{{"graph_hiden_dim", 3}});
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("graph_hiden_dim") != std::string::npos);
  }
}

TEST_CASE("node count resolution") {
  const auto open = graphrnn_config_from_json(json{{"generation", {{"mode", "fixed_n"}}}});
  CHECK(open.generation.n == 0);
  const auto resolved = resolve_generator_config(open, 30);
  CHECK(resolved.generation.n == 30);
  CHECK(resolved.max_nodes >= 30);
  auto fixed = open;
  fixed.generation.n = 12;
  CHECK(resolve_generator_config(fixed, 30).generation.n == 12);
  auto narrow = open;
  narrow.max_nodes = 20;
  CHECK_THROWS_AS(resolve_generator_config(narrow, 30), ValidationError);
  CHECK(default_cli_generator().generation.n == 0);
}

TEST_CASE("classifier config") {
  ClassifierConfig c;
  c.width = 17;
  c.blocks = 3;
  c.lr = 0.01;
  CHECK(classifier_config_from_json(classifier_config_to_json(c)) == c);
  CHECK_THROWS_AS(classifier_config_from_json(json{{"depth", 3}}), ValidationError);
}

TEST_CASE("experiment config") {
  ExperimentConfig c;
  c.experiment_id = "abc";
  c.seed = 9;
  c.io.cohort_dir = "raw";
  c.preprocessing.threshold.kind = ThresholdRule::Kind::otsu;
  c.preprocessing.gsr = true;
  c.preprocessing.reverse = true;
  c.preprocessing.ablation = "threshold";
  c.synth.n = 16;
  c.synth.class_b.p_in = 0.55;
  c.generator.ordering = TrainingOrder::identity;
  c.generator.generation = GenerationMode::fixed(16);
  c.protocol.arms = {Arm::raw, Arm::mixed};
  c.protocol.ratios = {0.3, 0.6};
  c.protocol.repeats = 4;
  c.mmd_sigma = 0.5;

  const auto back = experiment_config_from_json(experiment_config_to_json(c));
  CHECK(back.experiment_id == "abc");
  CHECK(back.seed == 9);
  CHECK(back.io.cohort_dir == "raw");
  CHECK(back.preprocessing.threshold.kind == ThresholdRule::Kind::otsu);
  CHECK(back.preprocessing.gsr);
  CHECK(back.preprocessing.reverse);
  CHECK_FALSE(back.preprocessing.upper_triangular);
  CHECK(back.preprocessing.ablation == "threshold");
  CHECK(back.synth.n == 16);
  CHECK(back.synth.class_b.p_in == 0.55);
  CHECK(back.generator == c.generator);
  CHECK(back.classifier == c.classifier);
  CHECK(back.protocol.arms == c.protocol.arms);
  CHECK(back.protocol.ratios == c.protocol.ratios);
  CHECK(back.protocol.repeats == 4);
  CHECK(back.mmd_sigma == 0.5);

  // Omitted sections keep their defaults.
  const auto empty = experiment_config_from_json(json::object());
  CHECK(empty.synth.n == 30);
  CHECK(empty.protocol.repeats == 1);
  CHECK(empty.generator.generation.n == 0);
}

TEST_CASE("experiment config errors") {
  CHECK_THROWS_AS(experiment_config_from_json(json{{"sed", 1}}), ValidationError);
  CHECK_THROWS_AS(experiment_config_from_json(json{{"protocol", {{"ratios", {1.5}}}}}), ValidationError);
  CHECK_THROWS_AS(experiment_config_from_json(json{{"protocol", {{"ratios", json::array()}}}}), ValidationError);
  CHECK_THROWS_AS(experiment_config_from_json(json{{"protocol", {{"arms", {"pretrain"}}}}}), ValidationError);
  CHECK_THROWS_AS(experiment_config_from_json(json{{"protocol", {{"repeats", 0}}}}), ValidationError);
  CHECK_THROWS_AS(experiment_config_from_json(json{{"preprocessing", {{"threshold", {{"rule", "mean"}}}}}}),
                  ValidationError);
  CHECK_THROWS_AS(experiment_config_from_json(json{{"preprocessing", {{"transforms", {"log"}}}}}), ValidationError);
  CHECK_THROWS_AS(experiment_config_from_json(json{{"preprocessing", {{"ablation", "atlas"}}}}), ValidationError);
  CHECK_THROWS_AS(experiment_config_from_json(json{{"io", {{"checkpoints", {{"patients", "x"}}}}}}),
                  ValidationError);
}

TEST_CASE("config files") {
  const auto dir = std::filesystem::temp_directory_path() / "brainaug_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "good.json") << R"({"experiment_id": "file", "seed": 3, "synth": {"n": 12}})";
    std::ofstream(dir / "bad.json") << R"({"experiment_id": "file", )";
  }
  const auto c = load_experiment_config(dir / "good.json");
  CHECK(c.experiment_id == "file");
  CHECK(c.synth.n == 12);
  CHECK_THROWS_AS(load_experiment_config(dir / "bad.json"), ValidationError);
  CHECK_THROWS_AS(load_experiment_config(dir / "missing.json"), ValidationError);
  std::filesystem::remove_all(dir);
}
