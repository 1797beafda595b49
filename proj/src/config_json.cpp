#include "brainaug/config_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "brainaug/error.hpp"

namespace brainaug {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view section) {
  if (!j.is_object()) throw ValidationError("config: '" + std::string(section) + "' must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("config: unknown key '" + key + "' in '" + std::string(section) + "'");
    }
  }
}

namespace {

template <class T>
void read_opt(const json& j, const char* key, T& out, std::string_view section) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config: bad value for '" + std::string(section) + "." + key + "'");
  }
}

const json& section_or_empty(const json& j, const char* key) {
  static const json empty = json::object();
  const auto it = j.find(key);
  return it == j.end() ? empty : *it;
}

}  // namespace

// ------------------------------------------------------------ generator ----

json graphrnn_config_to_json(const GraphRnnConfig& c) {
  json gen = c.generation.kind == GenerationMode::Kind::eos ? json{{"mode", "eos"}}
                                                            : json{{"mode", "fixed_n"}, {"n", c.generation.n}};
  return json{{"variant", c.variant == HeadVariant::edge_rnn ? "edge_rnn" : "mlp_head"},
              {"ordering", c.ordering == TrainingOrder::bfs ? "bfs" : "identity"},
              {"embed_dim", c.embed_dim},
              {"graph_hidden_dim", c.graph_hidden_dim},
              {"edge_hidden_dim", c.edge_hidden_dim},
              {"lookback", c.lookback == kUnboundedLookback ? json("unbounded") : json(c.lookback)},
              {"max_nodes", c.max_nodes},
              {"generation", gen},
              {"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"lr", c.lr},
              {"seed", c.seed},
              {"grad_clip", c.grad_clip},
              {"min_density", c.min_density},
              {"max_density", c.max_density}};
}

GraphRnnConfig graphrnn_config_from_json(const json& j) {
  constexpr std::string_view sec = "generator";
  reject_unknown_keys(j, {"variant", "ordering", "embed_dim", "graph_hidden_dim", "edge_hidden_dim", "lookback", "max_nodes",
                          "generation", "epochs", "batch_size", "lr", "seed", "grad_clip", "min_density",
                          "max_density"},
                      sec);
  GraphRnnConfig c;
  std::string variant = "edge_rnn";
  read_opt(j, "variant", variant, sec);
  if (variant == "edge_rnn") {
    c.variant = HeadVariant::edge_rnn;
  } else if (variant == "mlp_head") {
    c.variant = HeadVariant::mlp_head;
  } else {
    throw ValidationError("config: generator.variant must be 'edge_rnn' or 'mlp_head'");
  }
  std::string ordering = "bfs";
  read_opt(j, "ordering", ordering, sec);
  if (ordering == "bfs") {
    c.ordering = TrainingOrder::bfs;
  } else if (ordering == "identity") {
    c.ordering = TrainingOrder::identity;
  } else {
    throw ValidationError("config: generator.ordering must be 'bfs' or 'identity'");
  }
  read_opt(j, "embed_dim", c.embed_dim, sec);
  read_opt(j, "graph_hidden_dim", c.graph_hidden_dim, sec);
  read_opt(j, "edge_hidden_dim", c.edge_hidden_dim, sec);
  if (const auto it = j.find("lookback"); it != j.end()) {
    if (it->is_string() && it->get<std::string>() == "unbounded") {
      c.lookback = kUnboundedLookback;
    } else if (it->is_number_unsigned() && it->get<std::size_t>() > 0) {
      c.lookback = it->get<std::size_t>();
    } else {
      throw ValidationError("config: generator.lookback must be a positive integer or \"unbounded\"");
    }
  }
  read_opt(j, "max_nodes", c.max_nodes, sec);
  if (const auto it = j.find("generation"); it != j.end()) {
    reject_unknown_keys(*it, {"mode", "n"}, "generator.generation");
    std::string mode = "fixed_n";
    read_opt(*it, "mode", mode, "generator.generation");
    if (mode == "eos") {
      if (it->contains("n")) throw ValidationError("config: generator.generation.n only applies to fixed_n");
      c.generation = GenerationMode::eos();
    } else if (mode == "fixed_n") {
      std::size_t n = 0;
      read_opt(*it, "n", n, "generator.generation");
      c.generation = GenerationMode::fixed(n);
    } else {
      throw ValidationError("config: generator.generation.mode must be 'fixed_n' or 'eos'");
    }
  }
  read_opt(j, "epochs", c.epochs, sec);
  read_opt(j, "batch_size", c.batch_size, sec);
  read_opt(j, "lr", c.lr, sec);
  read_opt(j, "seed", c.seed, sec);
  read_opt(j, "grad_clip", c.grad_clip, sec);
  read_opt(j, "min_density", c.min_density, sec);
  read_opt(j, "max_density", c.max_density, sec);
  return c;
}

GraphRnnConfig default_cli_generator() {
  GraphRnnConfig c;
  c.generation = GenerationMode::fixed(0);
  return c;
}

// ----------------------------------------------------------- classifier ----

json classifier_config_to_json(const ClassifierConfig& c) {
  return json{{"input_dim", c.input_dim}, {"width", c.width}, {"blocks", c.blocks},       {"epochs", c.epochs},
              {"batch_size", c.batch_size}, {"lr", c.lr},     {"seed", c.seed},           {"grad_clip", c.grad_clip}};
}

ClassifierConfig classifier_config_from_json(const json& j) {
  constexpr std::string_view sec = "classifier";
  reject_unknown_keys(j, {"input_dim", "width", "blocks", "epochs", "batch_size", "lr", "seed", "grad_clip"}, sec);
  ClassifierConfig c;
  read_opt(j, "input_dim", c.input_dim, sec);
  read_opt(j, "width", c.width, sec);
  read_opt(j, "blocks", c.blocks, sec);
  read_opt(j, "epochs", c.epochs, sec);
  read_opt(j, "batch_size", c.batch_size, sec);
  read_opt(j, "lr", c.lr, sec);
  read_opt(j, "seed", c.seed, sec);
  read_opt(j, "grad_clip", c.grad_clip, sec);
  c.validate();
  return c;
}

// ----------------------------------------------------------- experiment ----

namespace {

PreprocessConfig preprocess_from_json(const json& j) {
  constexpr std::string_view sec = "preprocessing";
  reject_unknown_keys(j, {"gsr", "bandpass", "low_hz", "high_hz", "threshold", "transforms", "ablation"}, sec);
  PreprocessConfig c;
  read_opt(j, "gsr", c.gsr, sec);
  read_opt(j, "bandpass", c.bandpass, sec);
  read_opt(j, "low_hz", c.low_hz, sec);
  read_opt(j, "high_hz", c.high_hz, sec);
  if (const auto it = j.find("threshold"); it != j.end()) {
    reject_unknown_keys(*it, {"rule", "tau", "bins"}, "preprocessing.threshold");
    std::string rule = "fixed";
    read_opt(*it, "rule", rule, "preprocessing.threshold");
    if (rule == "fixed") {
      c.threshold.kind = ThresholdRule::Kind::fixed;
    } else if (rule == "otsu") {
      c.threshold.kind = ThresholdRule::Kind::otsu;
    } else {
      throw ValidationError("config: preprocessing.threshold.rule must be 'fixed' or 'otsu'");
    }
    read_opt(*it, "tau", c.threshold.tau, "preprocessing.threshold");
    read_opt(*it, "bins", c.threshold.bins, "preprocessing.threshold");
  }
  if (const auto it = j.find("transforms"); it != j.end()) {
    if (!it->is_array()) throw ValidationError("config: preprocessing.transforms must be an array");
    for (const auto& t : *it) {
      const std::string name = t.is_string() ? t.get<std::string>() : "";
      if (name == "reverse") {
        c.reverse = true;
      } else if (name == "triangular") {
        c.upper_triangular = true;
      } else {
        throw ValidationError("config: unknown transform (expected 'reverse' or 'triangular')");
      }
    }
  }
  read_opt(j, "ablation", c.ablation, sec);
  if (c.ablation != "none" && c.ablation != "pipeline" && c.ablation != "threshold") {
    throw ValidationError("config: preprocessing.ablation must be 'none', 'pipeline' or 'threshold'");
  }
  return c;
}

json preprocess_to_json(const PreprocessConfig& c) {
  json transforms = json::array();
  if (c.reverse) transforms.push_back("reverse");
  if (c.upper_triangular) transforms.push_back("triangular");
  json threshold = c.threshold.kind == ThresholdRule::Kind::fixed
                       ? json{{"rule", "fixed"}, {"tau", c.threshold.tau}}
                       : json{{"rule", "otsu"}, {"bins", c.threshold.bins}};
  return json{{"gsr", c.gsr},           {"bandpass", c.bandpass},     {"low_hz", c.low_hz},
              {"high_hz", c.high_hz},   {"threshold", threshold},     {"transforms", transforms},
              {"ablation", c.ablation}};
}

SynthClassConfig synth_class_from_json(const json& j, SynthClassConfig c, std::string_view sec) {
  reject_unknown_keys(j, {"p_in", "p_out", "within_corr"}, sec);
  read_opt(j, "p_in", c.p_in, sec);
  read_opt(j, "p_out", c.p_out, sec);
  read_opt(j, "within_corr", c.within_corr, sec);
  return c;
}

json synth_class_to_json(const SynthClassConfig& c) {
  return json{{"p_in", c.p_in}, {"p_out", c.p_out}, {"within_corr", c.within_corr}};
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j) {
  reject_unknown_keys(j, {"experiment_id", "seed", "io", "preprocessing", "synth", "generator", "sampling",
                          "classifier", "protocol", "metrics"},
                      "<root>");
  ExperimentConfig c;
  c.generator = default_cli_generator();
  read_opt(j, "experiment_id", c.experiment_id, "<root>");
  read_opt(j, "seed", c.seed, "<root>");

  const json& io = section_or_empty(j, "io");
  reject_unknown_keys(io, {"manifest", "cohort_dir", "generated_dir", "checkpoints"}, "io");
  read_opt(io, "manifest", c.io.manifest, "io");
  read_opt(io, "cohort_dir", c.io.cohort_dir, "io");
  read_opt(io, "generated_dir", c.io.generated_dir, "io");
  if (const auto it = io.find("checkpoints"); it != io.end()) {
    reject_unknown_keys(*it, {"autism", "control"}, "io.checkpoints");
    read_opt(*it, "autism", c.io.checkpoint_autism, "io.checkpoints");
    read_opt(*it, "control", c.io.checkpoint_control, "io.checkpoints");
  }

  if (j.contains("preprocessing")) c.preprocessing = preprocess_from_json(j.at("preprocessing"));

  const json& synth = section_or_empty(j, "synth");
  reject_unknown_keys(synth, {"n", "blocks", "class_a", "class_b", "count_per_class", "time_series", "n_timepoints",
                              "tr_seconds"},
                      "synth");
  read_opt(synth, "n", c.synth.n, "synth");
  read_opt(synth, "blocks", c.synth.blocks, "synth");
  if (synth.contains("class_a")) c.synth.class_a = synth_class_from_json(synth.at("class_a"), c.synth.class_a, "synth.class_a");
  if (synth.contains("class_b")) c.synth.class_b = synth_class_from_json(synth.at("class_b"), c.synth.class_b, "synth.class_b");
  read_opt(synth, "count_per_class", c.synth.count_per_class, "synth");
  read_opt(synth, "time_series", c.synth.time_series, "synth");
  read_opt(synth, "n_timepoints", c.synth.n_timepoints, "synth");
  read_opt(synth, "tr_seconds", c.synth.tr_seconds, "synth");

  if (j.contains("generator")) {
    c.generator = graphrnn_config_from_json(j.at("generator"));
    if (!j.at("generator").contains("generation")) c.generator.generation = GenerationMode::fixed(0);
  }

  const json& sampling = section_or_empty(j, "sampling");
  reject_unknown_keys(sampling, {"count_per_class"}, "sampling");
  read_opt(sampling, "count_per_class", c.sampling.count_per_class, "sampling");

  if (j.contains("classifier")) c.classifier = classifier_config_from_json(j.at("classifier"));

  const json& protocol = section_or_empty(j, "protocol");
  reject_unknown_keys(protocol, {"arms", "ratios", "repeats"}, "protocol");
  if (const auto it = protocol.find("arms"); it != protocol.end()) {
    c.protocol.arms.clear();
    for (const auto& a : *it) c.protocol.arms.push_back(arm_from_string(a.get<std::string>()));
    if (c.protocol.arms.empty()) throw ValidationError("config: protocol.arms is empty");
  }
  read_opt(protocol, "ratios", c.protocol.ratios, "protocol");
  read_opt(protocol, "repeats", c.protocol.repeats, "protocol");
  if (c.protocol.ratios.empty()) throw ValidationError("config: protocol.ratios is empty");
  for (double r : c.protocol.ratios) {
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("config: protocol ratios must lie in (0, 1)");
  }
  if (c.protocol.repeats < 1) throw ValidationError("config: protocol.repeats must be >= 1");

  const json& metrics = section_or_empty(j, "metrics");
  reject_unknown_keys(metrics, {"sigma"}, "metrics");
  read_opt(metrics, "sigma", c.mmd_sigma, "metrics");
  return c;
}

json experiment_config_to_json(const ExperimentConfig& c) {
  json arms = json::array();
  for (Arm a : c.protocol.arms) arms.push_back(std::string(to_string(a)));
  json gen = graphrnn_config_to_json(c.generator);
  if (c.generator.generation.kind == GenerationMode::Kind::fixed_n && c.generator.generation.n == 0) {
    gen["generation"] = json{{"mode", "fixed_n"}};
  }
  return json{
      {"experiment_id", c.experiment_id},
      {"seed", c.seed},
      {"io",
       {{"manifest", c.io.manifest},
        {"cohort_dir", c.io.cohort_dir},
        {"generated_dir", c.io.generated_dir},
        {"checkpoints", {{"autism", c.io.checkpoint_autism}, {"control", c.io.checkpoint_control}}}}},
      {"preprocessing", preprocess_to_json(c.preprocessing)},
      {"synth",
       {{"n", c.synth.n},
        {"blocks", c.synth.blocks},
        {"class_a", synth_class_to_json(c.synth.class_a)},
        {"class_b", synth_class_to_json(c.synth.class_b)},
        {"count_per_class", c.synth.count_per_class},
        {"time_series", c.synth.time_series},
        {"n_timepoints", c.synth.n_timepoints},
        {"tr_seconds", c.synth.tr_seconds}}},
      {"generator", gen},
      {"sampling", {{"count_per_class", c.sampling.count_per_class}}},
      {"classifier", classifier_config_to_json(c.classifier)},
      {"protocol", {{"arms", arms}, {"ratios", c.protocol.ratios}, {"repeats", c.protocol.repeats}}},
      {"metrics", {{"sigma", c.mmd_sigma}}}};
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  return experiment_config_from_json(j);
}

}  // namespace brainaug
