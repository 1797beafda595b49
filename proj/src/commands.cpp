#include "brainaug/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include "brainaug/error.hpp"
#include "brainaug/graphrnn.hpp"
#include "brainaug/metrics.hpp"

namespace brainaug {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

void log_line(const CommandContext& ctx, const std::string& msg) {
  if (ctx.log != nullptr) *ctx.log << msg << '\n' << std::flush;
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  return out;
}

void write_resolved_config(const fs::path& dir, const ExperimentConfig& config) {
  auto out = open_out(dir / "resolved_config.json");
  out << experiment_config_to_json(config).dump(2) << '\n';
}

std::string class_tag(Label l) { return std::string(to_string(l)); }

std::size_t cohort_node_count(const Cohort& cohort, const std::string& what) {
  if (cohort.graphs.empty()) throw ValidationError(what + " is empty");
  const std::size_t n = cohort.graphs.front().node_count();
  for (const auto& g : cohort.graphs) {
    if (g.node_count() != n) throw ValidationError(what + ": graphs differ in node count");
  }
  return n;
}

Cohort synthesize_cohort(const SynthConfig& s, std::uint64_t seed) {
  const SbmSpec a = SbmSpec::equal_blocks(s.n, s.blocks, s.class_a.p_in, s.class_a.p_out, Label::autism);
  const SbmSpec b = SbmSpec::equal_blocks(s.n, s.blocks, s.class_b.p_in, s.class_b.p_out, Label::control);
  SeededRng rng(derive_seed(seed, "synth"));
  return make_two_population_cohort(a, b, s.count_per_class, rng);
}

double probe_separability(const Cohort& cohort, std::uint64_t seed) {
  std::vector<Example> ex = make_examples(cohort.graphs);
  SeededRng rng(derive_seed(seed, "probe"));
  rng.shuffle(std::span<Example>(ex));
  const std::size_t half = ex.size() / 2;
  return linear_probe_accuracy(std::span<const Example>(ex).first(half), std::span<const Example>(ex).subspan(half));
}

Checkpoint train_class_generator(const GraphRnnConfig& base, const Cohort& cohort, Label label, std::uint64_t seed,
                                 const fs::path& out_dir, const CommandContext& ctx) {
  const std::vector<LabeledGraph> graphs = cohort.with_label(label);
  if (graphs.empty()) throw ValidationError("cohort has no '" + class_tag(label) + "' graphs");
  GraphRnnConfig config = resolve_generator_config(base, graphs.front().node_count());
  config.seed = derive_seed(seed, "train-gen/" + class_tag(label));
  SeededRng rng(config.seed);
  TrainOptions opts;
  opts.on_epoch = [&](std::size_t epoch, double loss) {
    if (epoch % 10 == 0 || epoch + 1 == config.epochs) {
      log_line(ctx, "  [" + class_tag(label) + "] epoch " + std::to_string(epoch) + " loss " + format_number(loss));
    }
  };
  log_line(ctx, "training " + class_tag(label) + " generator on " + std::to_string(graphs.size()) + " graphs");
  TrainResult res = train(config, graphs, rng, opts);
  fs::create_directories(out_dir);
  save_checkpoint(res.checkpoint, out_dir / ("generator_" + class_tag(label) + ".json"));
  auto loss_csv = open_out(out_dir / ("loss_" + class_tag(label) + ".csv"));
  loss_csv << "epoch,mean_loss\n";
  for (std::size_t e = 0; e < res.loss_curve.size(); ++e) loss_csv << e << ',' << format_number(res.loss_curve[e]) << '\n';
  return std::move(res.checkpoint);
}

AcceptedSamples sample_class(const Checkpoint& cp, std::size_t count, std::uint64_t seed) {
  SeededRng rng(seed);
  return sample_accepted(cp, count, rng);
}

void append_generated(Cohort& cohort, AcceptedSamples&& samples, Label label) {
  for (std::size_t i = 0; i < samples.graphs.size(); ++i) {
    samples.graphs[i].set_label(label);
    cohort.subject_ids.push_back("gen_" + class_tag(label) + "_" + std::to_string(i));
    cohort.graphs.push_back(std::move(samples.graphs[i]));
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

GraphRnnConfig resolve_generator_config(const GraphRnnConfig& config, std::size_t cohort_nodes) {
  GraphRnnConfig c = config;
  if (c.generation.kind == GenerationMode::Kind::fixed_n && c.generation.n == 0) c.generation.n = cohort_nodes;
  c.validate();
  if (cohort_nodes > c.max_nodes) {
    throw ValidationError("generator: cohort graphs have " + std::to_string(cohort_nodes) +
                          " nodes, more than max_nodes = " + std::to_string(c.max_nodes));
  }
  return c;
}

// ---------------------------------------------------------- preprocess ----

BinaryConnectome preprocess_subject(const RoiTimeSeries& ts_in, const PreprocessConfig& config, Label label) {
  RoiTimeSeries ts = ts_in;
  if (config.gsr) ts = global_signal_regression(ts);
  if (config.bandpass) ts = bandpass_filter(ts, config.low_hz, config.high_hz);
  const CorrelationMatrix corr = pearson_matrix(ts);
  BinaryConnectome g = config.threshold.kind == ThresholdRule::Kind::fixed ? binarize_fixed(corr, config.threshold.tau)
                                                                           : binarize_otsu(corr, config.threshold.bins);
  g.label = label;
  g.provenance.subject_id = ts.subject_id;
  if (config.gsr) g.provenance.transforms.insert(g.provenance.transforms.begin(), "gsr");
  if (config.bandpass) {
    g.provenance.transforms.insert(g.provenance.transforms.begin() + (config.gsr ? 1 : 0), "bandpass");
  }
  if (config.reverse) g = transform_reverse(g);
  if (config.upper_triangular) g = transform_upper_triangular(g);
  return g;
}

std::vector<std::pair<std::string, std::vector<PreprocessSummaryRow>>> cmd_preprocess(
    const ExperimentConfig& config, const fs::path& manifest_path, const CommandContext& ctx) {
  const auto manifest = read_manifest(manifest_path);
  if (manifest.empty()) throw ValidationError("manifest " + manifest_path.string() + " lists no subjects");

  std::vector<std::pair<std::string, PreprocessConfig>> variants;
  const PreprocessConfig& base = config.preprocessing;
  if (base.ablation == "pipeline") {
    for (auto [name, gsr, bp] : {std::tuple{"filter_global", true, true}, {"filter", false, true},
                                 {"global", true, false}, {"none", false, false}}) {
      PreprocessConfig v = base;
      v.gsr = gsr;
      v.bandpass = bp;
      variants.emplace_back(name, v);
    }
  } else if (base.ablation == "threshold") {
    for (double tau : {0.3, 0.5, 0.7}) {
      PreprocessConfig v = base;
      v.threshold = {ThresholdRule::Kind::fixed, tau, base.threshold.bins};
      variants.emplace_back("tau_" + format_number(tau), v);
    }
    PreprocessConfig v = base;
    v.threshold.kind = ThresholdRule::Kind::otsu;
    variants.emplace_back("otsu", v);
  } else {
    variants.emplace_back(".", base);
  }

  // Load everything first so a bad subject fails before any output is written.
  std::vector<std::pair<const ManifestEntry*, RoiTimeSeries>> subjects;
  std::vector<std::pair<std::string, std::string>> skipped;
  for (const auto& entry : manifest) {
    try {
      subjects.emplace_back(&entry, load_time_series(entry.path, entry));
    } catch (const ValidationError& e) {
      if (!ctx.skip_bad) throw ValidationError("subject " + entry.subject_id + ": " + e.what());
      skipped.emplace_back(entry.subject_id, e.what());
      log_line(ctx, "skipping " + entry.subject_id + ": " + e.what());
    }
  }

  std::vector<std::pair<std::string, std::vector<PreprocessSummaryRow>>> result;
  std::vector<bool> failed(subjects.size(), false);
  std::vector<std::vector<std::pair<std::string, BinaryConnectome>>> per_variant(variants.size());
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    const auto& [entry, ts] = subjects[s];
    try {
      for (std::size_t v = 0; v < variants.size(); ++v) {
        per_variant[v].emplace_back(entry->subject_id, preprocess_subject(ts, variants[v].second, entry->label));
      }
    } catch (const ValidationError& e) {
      if (!ctx.skip_bad) throw ValidationError("subject " + entry->subject_id + ": " + e.what());
      skipped.emplace_back(entry->subject_id, e.what());
      log_line(ctx, "skipping " + entry->subject_id + ": " + e.what());
      for (auto& pv : per_variant) {
        if (!pv.empty() && pv.back().first == entry->subject_id) pv.pop_back();
      }
    }
  }

  for (std::size_t v = 0; v < variants.size(); ++v) {
    const fs::path dir = ctx.out / variants[v].first;
    fs::create_directories(dir / "connectomes");
    ExperimentConfig resolved = config;
    resolved.preprocessing = variants[v].second;
    resolved.preprocessing.ablation = "none";
    resolved.io.manifest = manifest_path.string();
    write_resolved_config(dir, resolved);
    std::vector<PreprocessSummaryRow> rows;
    auto summary = open_out(dir / "summary.csv");
    summary << "subject_id,label,n,edges,threshold_used\n";
    for (const auto& [id, g] : per_variant[v]) {
      LabeledGraph graph = g.to_graph();
      write_edge_list(dir / "connectomes" / (id + ".edges"), graph);
      rows.push_back({id, g.label, g.n, g.edge_count(), g.provenance.threshold});
      summary << id << ',' << to_string(g.label) << ',' << g.n << ',' << g.edge_count() << ','
              << format_number(g.provenance.threshold) << '\n';
    }
    auto manifest_out = open_out(dir / "manifest.csv");
    manifest_out << "subject_id,path,label\n";
    for (const auto& [id, g] : per_variant[v]) {
      manifest_out << id << ",connectomes/" << id << ".edges," << to_string(g.label) << '\n';
    }
    result.emplace_back(variants[v].first, std::move(rows));
  }
  if (!skipped.empty()) {
    auto out = open_out(ctx.out / "skipped.csv");
    out << "subject_id,reason\n";
    for (const auto& [id, why] : skipped) out << id << ",\"" << why << "\"\n";
  }
  if (variants.size() > 1) write_resolved_config(ctx.out, config);
  return result;
}

// --------------------------------------------------------------- synth ----

SynthReport cmd_synth(const ExperimentConfig& config, const CommandContext& ctx) {
  const Cohort cohort = synthesize_cohort(config.synth, config.seed);
  write_graph_cohort(ctx.out, cohort);
  write_resolved_config(ctx.out, config);
  SynthReport rep;
  rep.graphs = cohort.size();
  rep.probe_accuracy = probe_separability(cohort, config.seed);
  {
    auto out = open_out(ctx.out / "probe.json");
    out << nlohmann::json{{"linear_probe_accuracy", rep.probe_accuracy}, {"split", 0.5}}.dump(2) << '\n';
  }
  log_line(ctx, "wrote " + std::to_string(rep.graphs) + " graphs; linear probe accuracy " +
                    format_number(rep.probe_accuracy));

  if (config.synth.time_series) {
    const auto& s = config.synth;
    SeededRng rng(derive_seed(config.seed, "synth-ts"));
    std::vector<ManifestEntry> entries;
    const fs::path ts_dir = ctx.out / "timeseries";
    fs::create_directories(ts_dir);
    for (std::size_t i = 0; i < cohort.size(); ++i) {
      const Label label = cohort.graphs[i].label();
      const auto& cls = label == Label::autism ? s.class_a : s.class_b;
      const SbmSpec spec = SbmSpec::equal_blocks(s.n, s.blocks, cls.p_in, cls.p_out, label);
      const std::string& id = cohort.subject_ids[i];
      const RoiTimeSeries ts = synth_time_series(spec, s.n_timepoints, s.tr_seconds, cls.within_corr, id, rng);
      write_time_series(ts_dir / (id + ".csv"), ts);
      entries.push_back({id, fs::path(id + ".csv"), label, s.tr_seconds});
    }
    write_manifest(ts_dir / "manifest.csv", entries);
  }
  return rep;
}

// ----------------------------------------------------------- train-gen ----

std::vector<fs::path> cmd_train_gen(const ExperimentConfig& config, const fs::path& cohort_dir,
                                    std::span<const Label> classes, const CommandContext& ctx) {
  const Cohort cohort = read_graph_cohort(cohort_dir);
  cohort_node_count(cohort, "cohort " + cohort_dir.string());
  fs::create_directories(ctx.out);
  ExperimentConfig resolved = config;
  resolved.io.cohort_dir = cohort_dir.string();
  resolved.generator = resolve_generator_config(config.generator, cohort.graphs.front().node_count());
  write_resolved_config(ctx.out, resolved);
  std::vector<fs::path> paths;
  for (Label label : classes) {
    train_class_generator(config.generator, cohort, label, config.seed, ctx.out, ctx);
    paths.push_back(ctx.out / ("generator_" + class_tag(label) + ".json"));
  }
  return paths;
}

// -------------------------------------------------------------- sample ----

SampleReport cmd_sample(const fs::path& checkpoint_path, std::size_t count, std::uint64_t seed,
                        const CommandContext& ctx) {
  if (count < 1) throw ValidationError("sample: count must be >= 1");
  const Checkpoint cp = load_checkpoint(checkpoint_path);
  AcceptedSamples samples = sample_class(cp, count, seed);
  SampleReport rep{samples.graphs.size(), samples.rejected};
  Cohort out;
  append_generated(out, std::move(samples), cp.metadata.label);
  write_graph_cohort(ctx.out, out);
  auto log = open_out(ctx.out / "sample_log.json");
  const double attempts = static_cast<double>(rep.accepted + rep.rejected);
  log << nlohmann::json{{"checkpoint", checkpoint_path.string()},
                        {"seed", seed},
                        {"requested", count},
                        {"accepted", rep.accepted},
                        {"rejected", rep.rejected},
                        {"rejection_rate", static_cast<double>(rep.rejected) / attempts},
                        {"min_density", cp.config.min_density},
                        {"max_density", cp.config.max_density}}
             .dump(2)
      << '\n';
  log_line(ctx, "sampled " + std::to_string(rep.accepted) + " graphs, rejected " + std::to_string(rep.rejected));
  return rep;
}

// ---------------------------------------------------------- experiment ----

std::vector<ExperimentCell> cmd_experiment(const ExperimentConfig& config, const CommandContext& ctx) {
  // Validate inputs before any training starts.
  if (!config.io.cohort_dir.empty() && !fs::exists(fs::path(config.io.cohort_dir) / "manifest.csv")) {
    throw ValidationError("experiment: cohort_dir " + config.io.cohort_dir + " has no manifest.csv");
  }
  if (!config.io.generated_dir.empty() && !fs::exists(fs::path(config.io.generated_dir) / "manifest.csv")) {
    throw ValidationError("experiment: generated_dir " + config.io.generated_dir + " has no manifest.csv");
  }
  const bool have_a = !config.io.checkpoint_autism.empty(), have_c = !config.io.checkpoint_control.empty();
  if (have_a != have_c) throw ValidationError("experiment: give checkpoints for both classes or neither");
  for (const auto& p : {config.io.checkpoint_autism, config.io.checkpoint_control}) {
    if (!p.empty() && !fs::exists(p)) throw ValidationError("experiment: checkpoint " + p + " does not exist");
  }
  for (double r : config.protocol.ratios) {
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("experiment: ratios must lie in (0, 1)");
  }
  config.classifier.validate();
  fs::create_directories(ctx.out);

  ExperimentConfig resolved = config;
  Cohort raw;
  if (config.io.cohort_dir.empty()) {
    raw = synthesize_cohort(config.synth, config.seed);
    write_graph_cohort(ctx.out / "raw", raw);
    log_line(ctx, "synthesized raw cohort of " + std::to_string(raw.size()) + " graphs");
  } else {
    raw = read_graph_cohort(config.io.cohort_dir);
  }
  const std::size_t n = cohort_node_count(raw, "raw cohort");
  if (raw.with_label(Label::autism).empty() || raw.with_label(Label::control).empty()) {
    throw ValidationError("experiment: raw cohort must contain both classes");
  }

  Cohort generated;
  const bool needs_generated = std::any_of(config.protocol.arms.begin(), config.protocol.arms.end(),
                                           [](Arm a) { return a != Arm::raw; });
  if (!config.io.generated_dir.empty()) {
    generated = read_graph_cohort(config.io.generated_dir);
  } else if (needs_generated) {
    std::map<Label, Checkpoint> checkpoints;
    if (have_a) {
      checkpoints[Label::autism] = load_checkpoint(config.io.checkpoint_autism);
      checkpoints[Label::control] = load_checkpoint(config.io.checkpoint_control);
    } else {
      resolved.generator = resolve_generator_config(config.generator, n);
      for (Label label : {Label::autism, Label::control}) {
        checkpoints[label] = train_class_generator(config.generator, raw, label, config.seed, ctx.out / "generators", ctx);
      }
    }
    for (Label label : {Label::autism, Label::control}) {
      AcceptedSamples s = sample_class(checkpoints[label], config.sampling.count_per_class,
                                       derive_seed(config.seed, "sample/" + class_tag(label)));
      log_line(ctx, "sampled " + std::to_string(s.graphs.size()) + " " + class_tag(label) + " graphs (" +
                        std::to_string(s.rejected) + " rejected)");
      append_generated(generated, std::move(s), label);
    }
    write_graph_cohort(ctx.out / "generated", generated);
  }
  if (needs_generated) cohort_node_count(generated, "generated cohort");
  write_resolved_config(ctx.out, resolved);

  // Protocol: arms x ratios x repeats.
  std::vector<ExperimentCell> cells;
  for (double ratio : config.protocol.ratios) {
    for (Arm arm : config.protocol.arms) cells.push_back({arm, ratio, {}, {}});
  }
  auto results = open_out(ctx.out / "results.csv");
  results << "experiment_id,arm,ratio,repeat,accuracy,auc\n";
  std::map<Arm, std::ofstream> roc_files;
  for (Arm arm : config.protocol.arms) {
    roc_files[arm] = open_out(ctx.out / ("roc_" + std::string(to_string(arm)) + ".csv"));
    roc_files[arm] << "ratio,repeat,threshold,fpr,tpr\n";
  }
  for (std::size_t ri = 0; ri < config.protocol.ratios.size(); ++ri) {
    const double ratio = config.protocol.ratios[ri];
    for (std::size_t rep = 0; rep < config.protocol.repeats; ++rep) {
      SeededRng rng(derive_seed(config.seed, "protocol", rep));
      const ProtocolResult res =
          run_augmentation_protocol(raw.graphs, generated.graphs, config.classifier, ratio, rng, config.protocol.arms);
      for (std::size_t a = 0; a < res.arms.size(); ++a) {
        const auto& ar = res.arms[a];
        ExperimentCell& cell = cells[ri * config.protocol.arms.size() + a];
        cell.accuracy.push_back(ar.report.accuracy);
        cell.auc.push_back(ar.report.auc);
        results << config.experiment_id << ',' << to_string(ar.arm) << ',' << format_number(ratio) << ',' << rep << ','
                << format_number(ar.report.accuracy) << ',' << format_number(ar.report.auc) << '\n';
        for (const auto& pt : ar.report.roc_points) {
          roc_files[ar.arm] << format_number(ratio) << ',' << rep << ',' << format_number(pt.threshold) << ','
                            << format_number(pt.fpr) << ',' << format_number(pt.tpr) << '\n';
        }
      }
      log_line(ctx, "ratio " + format_number(ratio) + " repeat " + std::to_string(rep) + " done");
    }
  }

  auto summary = open_out(ctx.out / "summary.csv");
  summary << "experiment_id,arm,ratio,repeats,accuracy_mean,accuracy_std,auc_mean,auc_std,unstable\n";
  for (const auto& c : cells) {
    summary << config.experiment_id << ',' << to_string(c.arm) << ',' << format_number(c.ratio) << ','
            << c.accuracy.size() << ',' << format_number(mean_of(c.accuracy)) << ','
            << format_number(stddev_of(c.accuracy)) << ',' << format_number(mean_of(c.auc)) << ','
            << format_number(stddev_of(c.auc)) << ',' << (is_unstable_ratio(c.ratio) ? 1 : 0) << '\n';
  }

  // Embedding of raw vs generated features, and degree-distribution MMD.
  std::vector<Vector> features;
  std::vector<std::pair<std::string, Label>> tags;
  for (const auto& g : raw.graphs) {
    features.push_back(featurize(g));
    tags.emplace_back("raw", g.label());
  }
  for (const auto& g : generated.graphs) {
    features.push_back(featurize(g));
    tags.emplace_back("generated", g.label());
  }
  const PcaResult pca = pca_embed_2d(features);
  auto pca_out = open_out(ctx.out / "pca.csv");
  pca_out << "source,label,pc1,pc2\n";
  for (std::size_t i = 0; i < pca.points.size(); ++i) {
    pca_out << tags[i].first << ',' << to_string(tags[i].second) << ',' << format_number(pca.points[i][0]) << ','
            << format_number(pca.points[i][1]) << '\n';
  }
  auto var_out = open_out(ctx.out / "pca_variance.csv");
  var_out << "component,explained_variance,ratio\n";
  for (std::size_t k = 0; k < 2; ++k) {
    var_out << k + 1 << ',' << format_number(pca.explained_variance[k]) << ','
            << format_number(pca.total_variance > 0 ? pca.explained_variance[k] / pca.total_variance : 0.0) << '\n';
  }
  if (!generated.graphs.empty()) {
    auto mmd_out = open_out(ctx.out / "mmd.csv");
    mmd_out << "label,mmd_degree\n";
    for (Label label : {Label::autism, Label::control}) {
      const auto a = raw.with_label(label), b = generated.with_label(label);
      if (a.empty() || b.empty()) continue;
      mmd_out << to_string(label) << ',' << format_number(mmd_degree(a, b, config.mmd_sigma)) << '\n';
    }
  }
  return cells;
}

// ------------------------------------------------------------- metrics ----

void cmd_metrics(const ExperimentConfig& config, const fs::path& cohort_dir, const std::optional<fs::path>& against,
                 const CommandContext& ctx) {
  const Cohort cohort = read_graph_cohort(cohort_dir);
  fs::create_directories(ctx.out);
  auto stats = open_out(ctx.out / "stats.csv");
  stats << "subject_id,label,n,edges,density,avg_clustering\n";
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const GraphStats s = graph_stats(cohort.graphs[i]);
    stats << cohort.subject_ids[i] << ',' << to_string(cohort.graphs[i].label()) << ','
          << cohort.graphs[i].node_count() << ',' << s.edges << ',' << format_number(s.density) << ','
          << format_number(s.avg_clustering) << '\n';
  }
  auto hist = open_out(ctx.out / "degree_histograms.csv");
  hist << "subject_id,degree,fraction\n";
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const Vector h = degree_histogram(cohort.graphs[i]);
    for (std::size_t d = 0; d < h.size(); ++d) {
      if (h[d] > 0.0) hist << cohort.subject_ids[i] << ',' << d << ',' << format_number(h[d]) << '\n';
    }
  }
  ExperimentConfig resolved = config;
  resolved.io.cohort_dir = cohort_dir.string();
  if (against) {
    const Cohort other = read_graph_cohort(*against);
    resolved.io.generated_dir = against->string();
    auto mmd_out = open_out(ctx.out / "mmd.csv");
    mmd_out << "label,mmd_degree\n";
    mmd_out << "all," << format_number(mmd_degree(cohort.graphs, other.graphs, config.mmd_sigma)) << '\n';
    for (Label label : {Label::autism, Label::control}) {
      const auto a = cohort.with_label(label), b = other.with_label(label);
      if (a.empty() || b.empty()) continue;
      mmd_out << to_string(label) << ',' << format_number(mmd_degree(a, b, config.mmd_sigma)) << '\n';
    }
  }
  write_resolved_config(ctx.out, resolved);
}

}  // namespace brainaug
