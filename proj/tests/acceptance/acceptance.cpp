// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// quantities. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "brainaug/cohort.hpp"
#include "brainaug/commands.hpp"
#include "brainaug/connectome.hpp"
#include "brainaug/discriminator.hpp"
#include "brainaug/graph.hpp"
#include "brainaug/graphrnn.hpp"
#include "brainaug/kernels.hpp"
#include "brainaug/metrics.hpp"
#include "oracles.hpp"

using namespace brainaug;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("brainaug_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

CorrelationMatrix random_correlation(std::size_t n, std::size_t len, SeededRng& rng) {
  // A shared factor with random loadings spreads the correlations out.
  DenseMatrix m(n, len);
  std::vector<double> factor(len);
  for (auto& f : factor) f = rng.gaussian();
  for (std::size_t r = 0; r < n; ++r) {
    const double w = 2 * rng.uniform() - 1;
    for (std::size_t t = 0; t < len; ++t) m(r, t) = w * factor[t] + rng.gaussian();
  }
  return pearson_matrix(oracle::make_series(m));
}

// ---------------------------------------------------------------- 1 ----
Outcome pearson_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  SeededRng rng(101);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const DenseMatrix m = oracle::random_matrix(5, 40, rng);
    const auto corr = pearson_matrix(oracle::make_series(m));
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        const double ref = i == j ? 1.0 : static_cast<double>(oracle::pearson(m.row(i), m.row(j)));
        worst = std::max(worst, std::abs(corr.values(i, j) - ref));
      }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-10 && secs < 1.0, "max |err| " + fmt("%.3g", worst) + ", " + fmt("%.3f", secs) + " s"};
}

// ---------------------------------------------------------------- 2 ----
Outcome sequence_round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  SeededRng rng(202);
  const double ps[] = {0.1, 0.5, 0.9};
  std::size_t ok = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng.below(30);
    const auto g = oracle::erdos_renyi(n, ps[k % 3], rng);
    const auto order = bfs_ordering(g, rng.below(n), rng);
    const auto back = sequence_to_graph(graph_to_sequence(g, order));
    // back is g with node order.perm[k] renamed k; undo the renaming.
    LabeledGraph undone(n, back.label());
    for (auto [i, j] : back.edges()) undone.add_edge(order.perm[i], order.perm[j]);
    undone.set_label(g.label());
    if (back == oracle::permute(g, order.perm) && undone == g) ++ok;
  }
  const double secs = seconds_since(t0);
  return {ok == 1000 && secs < 5.0, std::to_string(ok) + "/1000 exact, " + fmt("%.3f", secs) + " s"};
}

// ---------------------------------------------------------------- 3 ----
Outcome gradient_check() {
  const auto t0 = std::chrono::steady_clock::now();
  SeededRng rng(303);
  double worst = 0;
  std::size_t min_coords = SIZE_MAX;
  std::string cases;
  for (auto variant : {HeadVariant::edge_rnn, HeadVariant::mlp_head}) {
    for (auto mode : {GenerationMode::fixed(9), GenerationMode::eos()}) {
      GraphRnnConfig cfg;
      cfg.variant = variant;
      cfg.generation = mode;
      cfg.embed_dim = 8;
      cfg.graph_hidden_dim = 12;
      cfg.edge_hidden_dim = 6;
      cfg.max_nodes = 12;
      cfg.lookback = mode.kind == GenerationMode::Kind::eos ? 4 : kUnboundedLookback;
      auto params = GraphRnnParams::init(cfg, rng);
      params.visit([&](std::span<double> t) {
        for (double& v : t) v += 0.3 * rng.gaussian();
      });
      std::vector<GraphSequence> seqs;
      for (int s = 0; s < 3; ++s) {
        const std::size_t n = mode.kind == GenerationMode::Kind::eos ? 4 + rng.below(6) : 9;
        const auto g = oracle::erdos_renyi(n, 0.4, rng);
        seqs.push_back(graph_to_sequence(g, bfs_ordering(g, rng.below(n), rng), cfg.lookback));
      }
      auto grads = GraphRnnParams::zeros(cfg);
      for (const auto& s : seqs) sequence_loss(params, cfg, s, &grads, 1.0);
      auto f = [&](std::span<const double> flat) {
        auto q = params;
        unflatten(flat, q.tensors());
        double sum = 0;
        for (const auto& s : seqs) sum += sequence_loss(q, cfg, s).sum;
        return sum;
      };
      const Vector point = flatten(params.tensors());
      const Vector analytic = flatten(grads.tensors());
      std::vector<std::size_t> coords;
      for (int k = 0; k < 120; ++k) coords.push_back(rng.below(point.size()));
      const auto rep = finite_diff_check(f, point, analytic, 3e-3, coords, FiniteDiffStencil::five_point);
      worst = std::max(worst, rep.max_rel_error);
      min_coords = std::min(min_coords, rep.coordinates_checked);
      cases += fmt("%.2g ", rep.max_rel_error);
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && min_coords >= 100 && secs < 60.0,
          "max rel err " + fmt("%.3g", worst) + " (per case " + cases + "), " + std::to_string(min_coords) +
              " coords/case, " + fmt("%.2f", secs) + " s"};
}

// ---------------------------------------------------------------- 4 ----
Outcome zero_init_loss() {
  SeededRng rng(404);
  double worst = 0;
  int cohorts = 0;
  for (auto variant : {HeadVariant::edge_rnn, HeadVariant::mlp_head}) {
    for (auto eos : {false, true}) {
      for (int rep = 0; rep < 5; ++rep, ++cohorts) {
        GraphRnnConfig cfg;
        cfg.variant = variant;
        cfg.max_nodes = 24;
        cfg.generation = eos ? GenerationMode::eos() : GenerationMode::fixed(16);
        cfg.lookback = rep % 2 == 0 ? kUnboundedLookback : 5;
        std::vector<GraphSequence> seqs;
        for (int s = 0; s < 12; ++s) {
          const std::size_t n = eos ? 2 + rng.below(22) : 16;
          const auto g = oracle::erdos_renyi(n, rng.uniform(), rng);
          seqs.push_back(graph_to_sequence(g, bfs_ordering(g, rng.below(n), rng), cfg.lookback));
        }
        const double loss = mean_loss(GraphRnnParams::zeros(cfg), cfg, seqs);
        worst = std::max(worst, std::abs(loss - std::numbers::ln2));
      }
    }
  }
  return {worst < 1e-9, std::to_string(cohorts) + " cohorts, max |loss - ln 2| " + fmt("%.3g", worst)};
}

// ---------------------------------------------------------------- 5 ----
Outcome distribution_learning() {
  const auto t0 = std::chrono::steady_clock::now();
  SeededRng rng(505);
  const auto spec = SbmSpec::equal_blocks(20, 2, 0.8, 0.1, Label::autism);
  const auto train_set = sample_sbm(spec, 200, rng);
  const auto held_out = sample_sbm(spec, 100, rng);
  GraphRnnConfig cfg;
  cfg.generation = GenerationMode::fixed(20);
  cfg.max_nodes = 20;
  cfg.epochs = 150;
  cfg.seed = 5;
  SeededRng train_rng(cfg.seed);
  const auto res = train(cfg, train_set, train_rng);
  const double train_secs = seconds_since(t0);

  SeededRng init_rng(cfg.seed);
  const Checkpoint untrained{cfg, GraphRnnParams::init(cfg, init_rng), {}};
  SeededRng s1(55), s2(55);
  const double trained_mmd = mmd_degree(sample(res.checkpoint, 100, s1), held_out);
  const double untrained_mmd = mmd_degree(sample(untrained, 100, s2), held_out);
  const bool ok = trained_mmd < 0.5 * untrained_mmd && train_secs < 300.0;
  return {ok, "mmd trained " + fmt("%.4g", trained_mmd) + " vs untrained " + fmt("%.4g", untrained_mmd) +
                  " (ratio " + fmt("%.3f", trained_mmd / untrained_mmd) + "), " + std::to_string(cfg.epochs) +
                  " epochs in " + fmt("%.1f", train_secs) + " s"};
}

// ---------------------------------------------------------------- 6 ----
Outcome memorization() {
  LabeledGraph k3(3);
  k3.add_edge(0, 1);
  k3.add_edge(0, 2);
  k3.add_edge(1, 2);
  GraphRnnConfig cfg;
  cfg.generation = GenerationMode::fixed(3);
  cfg.max_nodes = 8;
  cfg.embed_dim = 6;
  cfg.graph_hidden_dim = 16;
  cfg.edge_hidden_dim = 8;
  cfg.epochs = 200;
  cfg.batch_size = 1;
  const std::vector<LabeledGraph> cohort(16, k3);
  SeededRng rng(606);
  const auto res = train(cfg, cohort, rng);
  SeededRng srng(607);
  std::size_t hits = 0;
  for (const auto& g : sample(res.checkpoint, 100, srng)) hits += g == k3 ? 1 : 0;
  return {hits >= 95, std::to_string(hits) + "/100 samples are K3, final loss " + fmt("%.4g", res.loss_curve.back())};
}

// ---------------------------------------------------------------- 7 ----
Outcome augmentation_analog() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.experiment_id = "acceptance";
  cfg.seed = 1;
  cfg.generator.ordering = TrainingOrder::identity;
  cfg.protocol.repeats = 10;
  const auto dir = scratch("augmentation");
  const auto cells = cmd_experiment(cfg, {dir});
  const double secs = seconds_since(t0);
  double raw = -1, gen = -1, mixed = -1;
  bool all_ran = cells.size() == 3;
  for (const auto& c : cells) {
    all_ran = all_ran && c.accuracy.size() == 10;
    const double m = mean(c.accuracy);
    if (c.arm == Arm::raw) raw = m;
    if (c.arm == Arm::generated) gen = m;
    if (c.arm == Arm::mixed) mixed = m;
  }
  fs::remove_all(dir);
  const bool ok = all_ran && raw >= 0 && gen >= 0 && mixed >= raw - 0.02 && secs < 1800.0;
  return {ok, "10-seed mean accuracy raw " + fmt("%.4f", raw) + ", generated " + fmt("%.4f", gen) + ", mixed " +
                  fmt("%.4f", mixed) + ", " + fmt("%.0f", secs) + " s"};
}

// ---------------------------------------------------------------- 8 ----
Outcome otsu_equivalence() {
  SeededRng rng(808);
  int matches = 0;
  for (int k = 0; k < 100; ++k) {
    const auto c = random_correlation(6 + rng.below(20), 60, rng);
    std::vector<double> upper;
    for (std::size_t i = 0; i < c.n(); ++i)
      for (std::size_t j = i + 1; j < c.n(); ++j) upper.push_back(c.values(i, j));
    const auto pick = oracle::otsu_scan(upper, 256);
    const auto res = otsu_threshold(c, 256);
    const auto g = binarize_otsu(c, 256);
    std::size_t expected_edges = 0;
    for (double v : upper) expected_edges += v > pick.threshold ? 1 : 0;
    if (res.boundary == pick.boundary && res.threshold == pick.threshold && g.edge_count() == expected_edges)
      ++matches;
  }
  return {matches == 100, std::to_string(matches) + "/100 thresholds identical to the exhaustive scan"};
}

// ---------------------------------------------------------------- 9 ----
Outcome auc_oracle() {
  SeededRng rng(909);
  double worst = 0;
  int staircases = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t m = 2 + rng.below(200);
    std::vector<double> s(m), y(m);
    std::vector<int> yi(m);
    const bool coarse = k % 2 == 0;  // half the sets have many ties
    for (std::size_t i = 0; i < m; ++i) {
      s[i] = coarse ? std::floor(rng.uniform() * 8) / 8 : rng.uniform();
      yi[i] = rng.bernoulli(0.4) ? 1 : 0;
    }
    yi[0] = 1;
    yi[1] = 0;
    for (std::size_t i = 0; i < m; ++i) y[i] = yi[i];
    const auto r = evaluate_scores(s, y);
    worst = std::max(worst, std::abs(r.auc - oracle::pairwise_auc(s, yi)));
    bool stair = r.roc_points.front().fpr == 0 && r.roc_points.front().tpr == 0 && r.roc_points.back().fpr == 1 &&
                 r.roc_points.back().tpr == 1;
    for (std::size_t p = 1; p < r.roc_points.size(); ++p)
      stair = stair && r.roc_points[p].fpr >= r.roc_points[p - 1].fpr &&
              r.roc_points[p].tpr >= r.roc_points[p - 1].tpr;
    staircases += stair ? 1 : 0;
  }
  return {worst < 1e-12 && staircases == 100,
          "max |auc - pairwise| " + fmt("%.3g", worst) + ", " + std::to_string(staircases) + "/100 monotone ROC"};
}

// --------------------------------------------------------------- 10 ----
Outcome threshold_monotonicity() {
  const auto dir = scratch("threshold");
  ExperimentConfig cfg;
  cfg.seed = 10;
  cfg.synth.n = 20;
  cfg.synth.count_per_class = 15;
  cfg.synth.time_series = true;
  cmd_synth(cfg, {dir / "synth"});
  cfg.preprocessing.ablation = "threshold";
  const auto variants = cmd_preprocess(cfg, dir / "synth" / "timeseries" / "manifest.csv", {dir / "ablation"});

  std::set<std::string> names;
  for (const auto& [name, rows] : variants) names.insert(name);
  const bool all_four = names == std::set<std::string>{"tau_0.3", "tau_0.5", "tau_0.7", "otsu"} &&
                        fs::exists(dir / "ablation" / "otsu" / "summary.csv");
  std::size_t subjects = 0, monotone = 0;
  if (variants.size() == 4) {
    for (std::size_t s = 0; s < variants[0].second.size(); ++s, ++subjects) {
      const auto e3 = variants[0].second[s].edges, e5 = variants[1].second[s].edges, e7 = variants[2].second[s].edges;
      monotone += (e7 <= e5 && e5 <= e3) ? 1 : 0;
    }
  }
  // Direct check on random correlation matrices as well.
  SeededRng rng(1010);
  std::size_t direct = 0;
  for (int k = 0; k < 200; ++k) {
    const auto c = random_correlation(5 + rng.below(30), 50, rng);
    const auto e3 = binarize_fixed(c, 0.3).edge_count(), e5 = binarize_fixed(c, 0.5).edge_count(),
               e7 = binarize_fixed(c, 0.7).edge_count();
    direct += (e7 <= e5 && e5 <= e3) ? 1 : 0;
  }
  fs::remove_all(dir);
  const bool ok = all_four && subjects == 30 && monotone == subjects && direct == 200;
  return {ok, std::string(all_four ? "4 variants emitted" : "variants missing") + ", " + std::to_string(monotone) +
                  "/" + std::to_string(subjects) + " subjects monotone, " + std::to_string(direct) +
                  "/200 random matrices monotone"};
}

// --------------------------------------------------------------- 11 ----
Outcome determinism() {
  ExperimentConfig cfg;
  cfg.experiment_id = "determinism";
  cfg.seed = 11;
  cfg.synth.n = 14;
  cfg.synth.count_per_class = 30;
  cfg.generator.embed_dim = 8;
  cfg.generator.graph_hidden_dim = 16;
  cfg.generator.edge_hidden_dim = 8;
  cfg.generator.epochs = 5;
  cfg.sampling.count_per_class = 20;
  cfg.classifier.width = 16;
  cfg.classifier.epochs = 10;
  cfg.protocol.ratios = {0.4, 0.6};
  cfg.protocol.repeats = 2;
  const auto a = scratch("determinism_a"), b = scratch("determinism_b");
  cmd_experiment(cfg, {a});
  cmd_experiment(cfg, {b});
  std::size_t same = 0, total = 0;
  for (const char* f : {"results.csv", "summary.csv", "roc_raw.csv", "roc_generated.csv", "roc_mixed.csv", "pca.csv",
                        "pca_variance.csv", "mmd.csv"}) {
    ++total;
    const auto x = slurp(a / f);
    same += !x.empty() && x == slurp(b / f) ? 1 : 0;
  }
  fs::remove_all(a);
  fs::remove_all(b);
  return {same == total, std::to_string(same) + "/" + std::to_string(total) + " CSV outputs byte-identical"};
}

// --------------------------------------------------------------- 12 ----
Outcome preprocessing_properties() {
  SeededRng rng(1212);
  double worst_gsr = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t rois = 3 + rng.below(20), len = 30 + rng.below(200);
    DenseMatrix m = oracle::random_matrix(rois, len, rng);
    for (std::size_t r = 0; r < rois; ++r)
      for (std::size_t t = 0; t < len; ++t) m(r, t) += 5.0 * r;
    std::vector<double> g(len, 0.0);
    for (std::size_t t = 0; t < len; ++t) {
      for (std::size_t r = 0; r < rois; ++r) g[t] += m(r, t);
      g[t] /= static_cast<double>(rois);
    }
    const auto out = global_signal_regression(oracle::make_series(m));
    for (std::size_t r = 0; r < rois; ++r)
      worst_gsr = std::max(worst_gsr, static_cast<double>(std::abs(oracle::pearson(out.signal.row(r), g))));
  }

  double worst_dc = 0, worst_amp = 0;
  const double tr = 2.0;
  // Bin-aligned frequencies: 0.05 Hz at length 100, bin 13/256 Hz at length 128.
  for (auto [len, f] : {std::pair{std::size_t{100}, 0.05}, std::pair{std::size_t{128}, 13.0 / 256.0},
                        std::pair{std::size_t{200}, 0.08}}) {
    for (double dc : {0.0, 3.0, -40.0}) {
      DenseMatrix m(2, len);
      for (std::size_t t = 0; t < len; ++t) {
        m(0, t) = dc + 1.7 * std::sin(2 * std::numbers::pi * f * t * tr);
        m(1, t) = dc;
      }
      const auto out = bandpass_filter(oracle::make_series(m, tr));
      for (std::size_t t = 0; t < len; ++t) {
        worst_amp = std::max(worst_amp, std::abs(out.signal(0, t) - 1.7 * std::sin(2 * std::numbers::pi * f * t * tr)));
        worst_dc = std::max(worst_dc, std::abs(out.signal(1, t)));
      }
    }
  }
  const bool ok = worst_gsr < 1e-10 && worst_dc < 1e-8 && worst_amp < 1e-8;
  return {ok, "GSR max |corr| " + fmt("%.3g", worst_gsr) + ", DC residue " + fmt("%.3g", worst_dc) +
                  ", in-band error " + fmt("%.3g", worst_amp)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Pearson oracle equivalence", pearson_oracle},
      {"sequence round trip", sequence_round_trip},
      {"gradient correctness", gradient_check},
      {"zero-init loss", zero_init_loss},
      {"distribution learning", distribution_learning},
      {"memorization sanity", memorization},
      {"augmentation analog", augmentation_analog},
      {"Otsu equivalence", otsu_equivalence},
      {"AUC oracle", auc_oracle},
      {"threshold monotonicity", threshold_monotonicity},
      {"determinism", determinism},
      {"preprocessing properties", preprocessing_properties},
  };
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) selected.insert(static_cast<std::size_t>(std::atoi(argv[i])));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!selected.empty() && !selected.count(k + 1)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  %2zu  %-28s %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
