#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "brainaug/commands.hpp"
#include "brainaug/error.hpp"
#include "brainaug/graphrnn.hpp"

using namespace brainaug;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("brainaug_cmd_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::vector<std::string> out;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.experiment_id = "tiny";
  c.seed = 11;
  c.synth.n = 10;
  c.synth.count_per_class = 20;
  c.synth.n_timepoints = 120;
  c.generator.ordering = TrainingOrder::identity;
  c.generator.embed_dim = 8;
  c.generator.graph_hidden_dim = 16;
  c.generator.edge_hidden_dim = 8;
  c.generator.max_nodes = 16;
  c.generator.epochs = 3;
  c.generator.batch_size = 8;
  c.sampling.count_per_class = 10;
  c.classifier.width = 16;
  c.classifier.blocks = 1;
  c.classifier.epochs = 5;
  c.classifier.batch_size = 8;
  c.protocol.repeats = 3;
  return c;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("synth") {
  const auto dir = scratch("synth");
  auto cfg = tiny_config();
  cfg.synth.time_series = true;
  const auto rep = cmd_synth(cfg, {dir / "a"});
  CHECK(rep.graphs == 40);
  const auto cohort = read_graph_cohort(dir / "a");
  CHECK(cohort.size() == 40);
  CHECK(cohort.with_label(Label::autism).size() == 20);
  CHECK(fs::exists(dir / "a" / "probe.json"));
  CHECK(fs::exists(dir / "a" / "resolved_config.json"));
  CHECK(lines_of(dir / "a" / "timeseries" / "manifest.csv").size() == 41);

  cmd_synth(cfg, {dir / "b"});
  CHECK(slurp(dir / "a" / "manifest.csv") == slurp(dir / "b" / "manifest.csv"));
  CHECK(read_graph_cohort(dir / "b").graphs == cohort.graphs);

  // Default-size populations come with a separability certificate.
  ExperimentConfig full;
  full.synth.count_per_class = 60;
  CHECK(cmd_synth(full, {dir / "full"}).probe_accuracy > 0.9);
  const auto probe = nlohmann::json::parse(slurp(dir / "full" / "probe.json"));
  CHECK(probe["linear_probe_accuracy"].get<double>() > 0.9);
  fs::remove_all(dir);
}

TEST_CASE("preprocess") {
  const auto dir = scratch("pre");
  auto cfg = tiny_config();
  cfg.synth.time_series = true;
  cfg.synth.count_per_class = 4;
  cmd_synth(cfg, {dir / "synth"});
  const fs::path manifest = dir / "synth" / "timeseries" / "manifest.csv";

  SUBCASE("single pipeline") {
    const auto res = cmd_preprocess(cfg, manifest, {dir / "single"});
    REQUIRE(res.size() == 1);
    CHECK(res[0].first == ".");
    CHECK(res[0].second.size() == 8);
    const auto rows = lines_of(dir / "single" / "summary.csv");
    CHECK(rows.front() == "subject_id,label,n,edges,threshold_used");
    CHECK(rows.size() == 9);
    const auto cohort = read_graph_cohort(dir / "single");
    CHECK(cohort.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(cohort.graphs[i].edge_count() == res[0].second[i].edges);

    cmd_preprocess(cfg, manifest, {dir / "again"});
    CHECK(slurp(dir / "single" / "summary.csv") == slurp(dir / "again" / "summary.csv"));
  }
  SUBCASE("threshold ablation") {
    cfg.preprocessing.ablation = "threshold";
    const auto res = cmd_preprocess(cfg, manifest, {dir / "tau"});
    REQUIRE(res.size() == 4);
    CHECK(res[0].first == "tau_0.3");
    CHECK(res[1].first == "tau_0.5");
    CHECK(res[2].first == "tau_0.7");
    CHECK(res[3].first == "otsu");
    for (const auto& [name, rows] : res) CHECK(fs::exists(dir / "tau" / name / "summary.csv"));
    for (std::size_t s = 0; s < 8; ++s) {
      CHECK(res[2].second[s].edges <= res[1].second[s].edges);
      CHECK(res[1].second[s].edges <= res[0].second[s].edges);
      CHECK(res[0].second[s].threshold_used == 0.3);
    }
  }
  SUBCASE("pipeline ablation") {
    cfg.preprocessing.ablation = "pipeline";
    const auto res = cmd_preprocess(cfg, manifest, {dir / "pipe"});
    REQUIRE(res.size() == 4);
    for (const char* name : {"filter_global", "filter", "global", "none"})
      CHECK(fs::exists(dir / "pipe" / name / "manifest.csv"));
  }
  SUBCASE("bad subject") {
    {
      std::ofstream(dir / "synth" / "timeseries" / "broken.csv") << "a,b\n1,x\n";
      std::ofstream(manifest, std::ios::app) << "broken,broken.csv,autism,2\n";
    }
    CHECK_THROWS_WITH_AS(cmd_preprocess(cfg, manifest, {dir / "strict"}), doctest::Contains("broken"),
                         ValidationError);
    CHECK_FALSE(fs::exists(dir / "strict" / "summary.csv"));
    const auto res = cmd_preprocess(cfg, manifest, {dir / "lenient", true});
    CHECK(res[0].second.size() == 8);
    const auto skipped = lines_of(dir / "lenient" / "skipped.csv");
    REQUIRE(skipped.size() == 2);
    CHECK(skipped[1].rfind("broken,", 0) == 0);
  }
  SUBCASE("missing manifest") {
    CHECK_THROWS_AS(cmd_preprocess(cfg, dir / "nope.csv", {dir / "x"}), ValidationError);
  }
  fs::remove_all(dir);
}

TEST_CASE("train-gen and sample") {
  const auto dir = scratch("gen");
  const auto cfg = tiny_config();
  cmd_synth(cfg, {dir / "cohort"});
  const Label both[] = {Label::autism, Label::control};
  const auto paths = cmd_train_gen(cfg, dir / "cohort", both, {dir / "gens"});
  REQUIRE(paths.size() == 2);
  const auto a = load_checkpoint(paths[0]), c = load_checkpoint(paths[1]);
  CHECK(a.metadata.label == Label::autism);
  CHECK(c.metadata.label == Label::control);
  CHECK_FALSE(a.params == c.params);
  CHECK(a.config.generation.n == 10);
  const auto loss = lines_of(dir / "gens" / "loss_autism.csv");
  CHECK(loss.front() == "epoch,mean_loss");
  CHECK(loss.size() == 1 + cfg.generator.epochs);
  CHECK(fs::exists(dir / "gens" / "resolved_config.json"));

  const auto r1 = cmd_sample(paths[0], 7, 5, {dir / "s1"});
  cmd_sample(paths[0], 7, 5, {dir / "s2"});
  CHECK(r1.accepted == 7);
  CHECK(slurp(dir / "s1" / "manifest.csv") == slurp(dir / "s2" / "manifest.csv"));
  const auto s1 = read_graph_cohort(dir / "s1"), s2 = read_graph_cohort(dir / "s2");
  CHECK(s1.graphs == s2.graphs);
  for (const auto& g : s1.graphs) {
    CHECK(g.node_count() == 10);
    CHECK(g.label() == Label::autism);
    CHECK(passes_density_filter(g, a.config.min_density, a.config.max_density));
  }
  // The logged rejection count equals a recount over the same stream.
  SeededRng replay(5);
  std::size_t ok = 0, bad = 0;
  while (ok < 7) (passes_density_filter(sample(a, 1, replay)[0], a.config.min_density, a.config.max_density) ? ok : bad) += 1;
  CHECK(bad == r1.rejected);
  const auto log = nlohmann::json::parse(slurp(dir / "s1" / "sample_log.json"));
  CHECK(log["accepted"] == 7);
  CHECK(log["rejected"] == r1.rejected);
  CHECK(log["rejection_rate"].get<double>() == doctest::Approx(double(r1.rejected) / (7 + r1.rejected)));

  CHECK_THROWS_AS(cmd_sample(dir / "missing.json", 3, 1, {dir / "s3"}), ValidationError);
  CHECK_THROWS_AS(cmd_sample(paths[0], 0, 1, {dir / "s3"}), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("experiment") {
  const auto dir = scratch("exp");
  const auto cfg = tiny_config();
  const auto cells = cmd_experiment(cfg, {dir / "a"});
  REQUIRE(cells.size() == 3);
  for (const auto& c : cells) {
    CHECK(c.accuracy.size() == 3);
    CHECK(c.auc.size() == 3);
  }
  for (const char* f : {"results.csv", "summary.csv", "roc_raw.csv", "roc_generated.csv", "roc_mixed.csv", "pca.csv",
                        "pca_variance.csv", "mmd.csv", "resolved_config.json"})
    CHECK(fs::exists(dir / "a" / f));
  CHECK(lines_of(dir / "a" / "results.csv").size() == 1 + 3 * 3);
  const auto summary = lines_of(dir / "a" / "summary.csv");
  REQUIRE(summary.size() == 4);
  const auto row = split(summary[1]);
  REQUIRE(row.size() == 9);
  CHECK(row[3] == "3");
  CHECK_FALSE(row[5].empty());
  CHECK(lines_of(dir / "a" / "pca.csv").size() == 1 + 40 + 20);

  SUBCASE("byte-identical rerun") {
    cmd_experiment(cfg, {dir / "b"});
    for (const char* f : {"results.csv", "summary.csv", "roc_raw.csv", "roc_mixed.csv", "pca.csv", "mmd.csv"})
      CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  SUBCASE("raw arm equals the standalone protocol") {
    const auto raw = read_graph_cohort(dir / "a" / "raw");
    SeededRng rng(derive_seed(cfg.seed, "protocol", 0));
    const Arm raw_only[] = {Arm::raw};
    const auto res = run_augmentation_protocol(raw.graphs, {}, cfg.classifier, 0.6, rng, raw_only);
    CHECK(res.arms[0].report.accuracy == cells[0].accuracy[0]);
    CHECK(res.arms[0].report.auc == cells[0].auc[0]);
  }
  SUBCASE("reuses given checkpoints and cohorts") {
    auto c2 = cfg;
    c2.io.cohort_dir = (dir / "a" / "raw").string();
    c2.io.checkpoint_autism = (dir / "a" / "generators" / "generator_autism.json").string();
    c2.io.checkpoint_control = (dir / "a" / "generators" / "generator_control.json").string();
    cmd_experiment(c2, {dir / "c"});
    CHECK(slurp(dir / "a" / "results.csv") == slurp(dir / "c" / "results.csv"));
  }
  SUBCASE("inputs are validated before training") {
    auto bad = cfg;
    bad.io.checkpoint_autism = (dir / "none.json").string();
    bad.io.checkpoint_control = (dir / "none.json").string();
    CHECK_THROWS_AS(cmd_experiment(bad, {dir / "d"}), ValidationError);
    CHECK_FALSE(fs::exists(dir / "d" / "generators"));
    bad = cfg;
    bad.io.cohort_dir = (dir / "nowhere").string();
    CHECK_THROWS_AS(cmd_experiment(bad, {dir / "d"}), ValidationError);
    bad = cfg;
    bad.io.checkpoint_autism = (dir / "a" / "generators" / "generator_autism.json").string();
    CHECK_THROWS_AS(cmd_experiment(bad, {dir / "d"}), ValidationError);
  }
  fs::remove_all(dir);
}

TEST_CASE("metrics") {
  const auto dir = scratch("met");
  auto cfg = tiny_config();
  cmd_synth(cfg, {dir / "a"});
  cfg.seed = 12;
  cmd_synth(cfg, {dir / "b"});
  cmd_metrics(cfg, dir / "a", dir / "b", {dir / "m"});
  const auto stats = lines_of(dir / "m" / "stats.csv");
  CHECK(stats.size() == 41);
  CHECK(fs::exists(dir / "m" / "degree_histograms.csv"));
  const auto mmd = lines_of(dir / "m" / "mmd.csv");
  CHECK(mmd.size() >= 2);
  cmd_metrics(cfg, dir / "a", std::nullopt, {dir / "n"});
  CHECK_FALSE(fs::exists(dir / "n" / "mmd.csv"));
  CHECK(slurp(dir / "m" / "stats.csv") == slurp(dir / "n" / "stats.csv"));
  fs::remove_all(dir);
}
