#include "brainaug/graphrnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "brainaug/config_json.hpp"
#include "brainaug/error.hpp"

namespace brainaug {

void GraphRnnConfig::validate() const {
  if (embed_dim < 1 || graph_hidden_dim < 1 || edge_hidden_dim < 1) {
    throw ValidationError("generator: hidden dimensions must be >= 1");
  }
  if (max_nodes < 2) throw ValidationError("generator: max_nodes must be >= 2");
  if (generation.kind == GenerationMode::Kind::fixed_n &&
      (generation.n < 1 || generation.n > max_nodes)) {
    throw ValidationError("generator: fixed_n(n) requires 1 <= n <= max_nodes");
  }
  if (batch_size < 1) throw ValidationError("generator: batch_size must be >= 1");
  if (!(lr > 0.0)) throw ValidationError("generator: lr must be positive");
  if (!(min_density >= 0.0 && min_density <= max_density && max_density <= 1.0)) {
    throw ValidationError("generator: need 0 <= min_density <= max_density <= 1");
  }
}

namespace {

const std::size_t kEdgeInputDim = 2;

template <std::size_t N>
MlpParams make_mlp(const std::size_t (&dims)[N], const Activation (&acts)[N - 1]) {
  return MlpParams::zeros(std::span<const std::size_t>(dims), std::span<const Activation>(acts));
}

}  // namespace

GraphRnnParams GraphRnnParams::zeros(const GraphRnnConfig& c) {
  c.validate();
  const std::size_t w = c.slot_width();
  GraphRnnParams p;
  p.embed = make_mlp({w, c.embed_dim}, {Activation::tanh});
  p.graph_gru = GruCellParams::zeros(c.embed_dim, c.graph_hidden_dim);
  p.h0.assign(c.graph_hidden_dim, 0.0);
  if (c.variant == HeadVariant::mlp_head) {
    p.head = make_mlp({c.graph_hidden_dim, c.edge_hidden_dim, w}, {Activation::tanh, Activation::sigmoid});
  } else {
    p.edge_init = make_mlp({c.graph_hidden_dim, c.edge_hidden_dim}, {Activation::identity});
    p.edge_gru = GruCellParams::zeros(kEdgeInputDim, c.edge_hidden_dim);
    p.edge_out = make_mlp({c.edge_hidden_dim, c.edge_hidden_dim, 1}, {Activation::tanh, Activation::sigmoid});
  }
  return p;
}

constexpr double kOutputInitScale = 0.1;

GraphRnnParams GraphRnnParams::init(const GraphRnnConfig& c, SeededRng& rng) {
  GraphRnnParams p = zeros(c);
  p.embed.init_xavier(rng);
  p.graph_gru.init_xavier(rng);
  if (c.variant == HeadVariant::mlp_head) {
    p.head.init_xavier(rng);
  } else {
    p.edge_init.init_xavier(rng);
    p.edge_gru.init_xavier(rng);
    p.edge_out.init_xavier(rng);
  }
  // Small output logits so a fresh model starts near p = 0.5.
  for (MlpParams* m : {&p.head, &p.edge_out}) {
    if (m->layers.empty()) continue;
    for (double& w : m->layers.back().weight.flat()) w *= kOutputInitScale;
  }
  return p;
}

TensorRefs GraphRnnParams::tensors() {
  TensorRefs refs;
  visit([&](std::span<double> t) {
    if (!t.empty()) refs.push_back(t);
  });
  return refs;
}

// ------------------------------------------------- teacher-forced pass ----

namespace {

struct EdgeStepCache {
  GruCache gru;
  MlpCache out;
};

struct StepCache {
  MlpCache embed;
  GruCache gru;
  MlpCache head;  // mlp_head
  MlpCache init;  // edge_rnn
  std::vector<EdgeStepCache> edges;
  std::vector<double> probs;   // recency order
  std::vector<double> target;  // recency order
};

// Adjacency vector (oldest-first) reversed into recency order, zero-padded.
Vector recency_slots(const std::vector<std::uint8_t>& s, std::size_t width) {
  Vector x(width, 0.0);
  const std::size_t len = s.size();
  for (std::size_t k = 0; k < len && k < width; ++k) x[k] = s[len - 1 - k];
  return x;
}

void check_sequence(const GraphRnnConfig& config, const GraphSequence& seq) {
  if (seq.lookback != config.lookback) {
    throw ValidationError("sequence lookback " + std::to_string(seq.lookback) +
                          " does not match generator lookback " + std::to_string(config.lookback));
  }
  if (seq.n > config.max_nodes) {
    throw ValidationError("graph with " + std::to_string(seq.n) + " nodes exceeds max_nodes = " +
                          std::to_string(config.max_nodes));
  }
  if (seq.vectors.size() != seq.n) throw ValidationError("malformed sequence: vector count != n");
  for (std::size_t i = 0; i < seq.n; ++i) {
    if (seq.vectors[i].size() != seq.expected_length(i)) {
      throw ValidationError("malformed sequence: vector " + std::to_string(i + 1) + " has wrong length");
    }
  }
}

// Runs the model over one sequence. Fills step caches when backward is
// requested; returns the summed BCE.
LossSum run_sequence(const GraphRnnParams& p, const GraphRnnConfig& c, const GraphSequence& seq,
                     std::vector<Vector>* probs_out, GraphRnnParams* grads, double grad_scale) {
  check_sequence(c, seq);
  LossSum loss;
  const std::size_t n = seq.n;
  if (n == 0) return loss;
  const bool eos = c.generation.kind == GenerationMode::Kind::eos;
  const std::size_t steps = eos ? n : n - 1;
  const std::size_t w = c.slot_width();
  const bool backward = grads != nullptr;

  std::vector<StepCache> caches(steps);
  Vector h = p.h0;
  for (std::size_t step = 0; step < steps; ++step) {
    StepCache& sc = caches[step];
    const Vector x = recency_slots(seq.vectors[step], w);
    const Vector e = mlp_forward(p.embed, x, backward ? &sc.embed : nullptr);
    h = gru_step(p.graph_gru, h, e, backward ? &sc.gru : nullptr);

    const std::size_t q = step + 1;
    const std::size_t len = seq.expected_length(q);
    if (q < n) {
      sc.target.assign(len, 0.0);
      const auto& s = seq.vectors[q];
      for (std::size_t k = 0; k < len; ++k) sc.target[k] = s[len - 1 - k];
    } else {
      sc.target.assign(len, 0.0);  // end-of-sequence vector
    }

    sc.probs.resize(len);
    if (c.variant == HeadVariant::mlp_head) {
      const Vector out = mlp_forward(p.head, h, backward ? &sc.head : nullptr);
      std::copy_n(out.begin(), len, sc.probs.begin());
    } else {
      Vector eh = mlp_forward(p.edge_init, h, backward ? &sc.init : nullptr);
      if (backward) sc.edges.resize(len);
      Vector in(kEdgeInputDim, 0.0);
      for (std::size_t k = 0; k < len; ++k) {
        in[0] = k == 0 ? 0.0 : sc.target[k - 1];
        in[1] = k == 0 ? 1.0 : 0.0;
        eh = gru_step(p.edge_gru, eh, in, backward ? &sc.edges[k].gru : nullptr);
        sc.probs[k] = mlp_forward(p.edge_out, eh, backward ? &sc.edges[k].out : nullptr)[0];
      }
    }
    for (std::size_t k = 0; k < len; ++k) loss.sum += bce_term(sc.probs[k], sc.target[k]);
    loss.terms += len;

    if (probs_out != nullptr) {
      Vector oldest_first(len);
      for (std::size_t k = 0; k < len; ++k) oldest_first[k] = sc.probs[len - 1 - k];
      probs_out->push_back(std::move(oldest_first));
    }
  }
  if (!backward) return loss;

  // Backward through time. The sigmoid is fused with the cross-entropy:
  // d(term)/d(logit) = p - y.
  Vector dh_next(c.graph_hidden_dim, 0.0);
  for (std::size_t step = steps; step-- > 0;) {
    StepCache& sc = caches[step];
    const std::size_t len = sc.probs.size();
    Vector dh = dh_next;
    if (c.variant == HeadVariant::mlp_head) {
      Vector dlogit(w, 0.0);
      for (std::size_t k = 0; k < len; ++k) dlogit[k] = (sc.probs[k] - sc.target[k]) * grad_scale;
      mlp_backward(p.head, sc.head, dlogit, grads->head, dh, true);
    } else {
      Vector de(c.edge_hidden_dim, 0.0);
      for (std::size_t k = len; k-- > 0;) {
        const double dlogit = (sc.probs[k] - sc.target[k]) * grad_scale;
        mlp_backward(p.edge_out, sc.edges[k].out, std::span<const double>(&dlogit, 1), grads->edge_out, de, true);
        Vector de_prev(c.edge_hidden_dim, 0.0);
        gru_backward(p.edge_gru, sc.edges[k].gru, de, grads->edge_gru, de_prev, {});
        de = std::move(de_prev);
      }
      mlp_backward(p.edge_init, sc.init, de, grads->edge_init, dh);
    }
    Vector dh_prev(c.graph_hidden_dim, 0.0);
    Vector de_in(c.embed_dim, 0.0);
    gru_backward(p.graph_gru, sc.gru, dh, grads->graph_gru, dh_prev, de_in);
    mlp_backward(p.embed, sc.embed, de_in, grads->embed, {});
    dh_next = std::move(dh_prev);
  }
  for (std::size_t k = 0; k < c.graph_hidden_dim; ++k) grads->h0[k] += dh_next[k];
  return loss;
}

}  // namespace

TeacherForcedOutput forward_teacher_forced(const GraphRnnParams& params, const GraphRnnConfig& config,
                                           const GraphSequence& seq) {
  TeacherForcedOutput out;
  run_sequence(params, config, seq, &out.probabilities, nullptr, 1.0);
  return out;
}

LossSum sequence_loss(const GraphRnnParams& params, const GraphRnnConfig& config, const GraphSequence& seq,
                      GraphRnnParams* grads, double grad_scale) {
  return run_sequence(params, config, seq, nullptr, grads, grad_scale);
}

double mean_loss(const GraphRnnParams& params, const GraphRnnConfig& config,
                 std::span<const GraphSequence> seqs) {
  LossSum total;
  for (const auto& s : seqs) {
    const LossSum l = sequence_loss(params, config, s);
    total.sum += l.sum;
    total.terms += l.terms;
  }
  return total.mean();
}

// ------------------------------------------------------------ training ----

TrainResult train(const GraphRnnConfig& config, std::span<const LabeledGraph> cohort, SeededRng& rng,
                  const TrainOptions& options) {
  config.validate();
  if (cohort.empty()) throw ValidationError("train: empty cohort");
  for (const auto& g : cohort) {
    if (g.node_count() > config.max_nodes) {
      throw ValidationError("train: graph with " + std::to_string(g.node_count()) +
                            " nodes exceeds max_nodes = " + std::to_string(config.max_nodes));
    }
    if (g.node_count() == 0) throw ValidationError("train: empty graph in cohort");
  }

  TrainResult result;
  GraphRnnParams params = GraphRnnParams::init(config, rng);
  GraphRnnParams grads = GraphRnnParams::zeros(config);
  const TensorRefs param_refs = params.tensors();
  const TensorRefs grad_refs = grads.tensors();
  AdamState adam(AdamConfig{config.lr, 0.9, 0.999, 1e-8}, param_refs);

  std::vector<std::size_t> order(cohort.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<GraphSequence> seqs;
    seqs.reserve(cohort.size());
    for (std::size_t idx : order) {
      const LabeledGraph& g = cohort[idx];
      if (config.ordering == TrainingOrder::identity) {
        NodeOrdering ident;
        ident.perm.resize(g.node_count());
        std::iota(ident.perm.begin(), ident.perm.end(), std::size_t{0});
        seqs.push_back(graph_to_sequence(g, ident, config.lookback));
        continue;
      }
      const auto start = static_cast<std::size_t>(rng.below(g.node_count()));
      seqs.push_back(graph_to_sequence(g, bfs_ordering(g, start, rng), config.lookback));
    }

    LossSum epoch_loss;
    for (std::size_t b = 0; b < seqs.size(); b += config.batch_size) {
      const std::size_t e = std::min(seqs.size(), b + config.batch_size);
      zero_tensors(grad_refs);
      LossSum batch;
      for (std::size_t i = b; i < e; ++i) {
        const LossSum l = sequence_loss(params, config, seqs[i], &grads, 1.0);
        batch.sum += l.sum;
        batch.terms += l.terms;
      }
      if (batch.terms == 0) continue;
      if (!std::isfinite(batch.sum)) {
        throw RuntimeFailure("train: non-finite loss at epoch " + std::to_string(epoch));
      }
      const double scale = 1.0 / static_cast<double>(batch.terms);
      for (const auto& gref : grad_refs) {
        for (double& v : gref) v *= scale;
      }
      clip_global_norm(grad_refs, config.grad_clip);
      adam.update(param_refs, grad_refs);
      epoch_loss.sum += batch.sum;
      epoch_loss.terms += batch.terms;
    }
    const double mean = epoch_loss.mean();
    if (!std::isfinite(mean)) throw RuntimeFailure("train: non-finite loss at epoch " + std::to_string(epoch));
    result.loss_curve.push_back(mean);
    if (options.on_epoch) options.on_epoch(epoch, mean);
  }

  Label label = cohort.front().label();
  for (const auto& g : cohort) {
    if (g.label() != label) label = Label::unlabeled;
  }
  result.checkpoint.config = config;
  result.checkpoint.params = std::move(params);
  result.checkpoint.metadata.epochs_completed = config.epochs;
  result.checkpoint.metadata.final_loss = result.loss_curve.empty() ? 0.0 : result.loss_curve.back();
  result.checkpoint.metadata.seed = config.seed;
  result.checkpoint.metadata.label = label;
  result.checkpoint.metadata.cohort_size = cohort.size();
  return result;
}

// ------------------------------------------------------------ sampling ----

LabeledGraph sample_one(const GraphRnnParams& p, const GraphRnnConfig& c, Label label, SeededRng& rng) {
  const bool eos = c.generation.kind == GenerationMode::Kind::eos;
  const std::size_t target_n = eos ? c.max_nodes : c.generation.n;
  const std::size_t w = c.slot_width();

  GraphSequence seq;
  seq.lookback = c.lookback;
  seq.label = label;
  seq.vectors.emplace_back();  // first node: empty vector
  Vector h = p.h0;
  while (seq.vectors.size() < target_n) {
    const std::size_t q = seq.vectors.size();
    const Vector x = recency_slots(seq.vectors.back(), w);
    h = gru_step(p.graph_gru, h, mlp_forward(p.embed, x));
    const std::size_t len = seq.expected_length(q);
    std::vector<std::uint8_t> recent(len, 0);
    if (c.variant == HeadVariant::mlp_head) {
      const Vector theta = mlp_forward(p.head, h);
      for (std::size_t k = 0; k < len; ++k) recent[k] = rng.bernoulli(theta[k]) ? 1 : 0;
    } else {
      Vector eh = mlp_forward(p.edge_init, h);
      Vector in(kEdgeInputDim, 0.0);
      for (std::size_t k = 0; k < len; ++k) {
        in[0] = k == 0 ? 0.0 : static_cast<double>(recent[k - 1]);
        in[1] = k == 0 ? 1.0 : 0.0;
        eh = gru_step(p.edge_gru, eh, in);
        recent[k] = rng.bernoulli(mlp_forward(p.edge_out, eh)[0]) ? 1 : 0;
      }
    }
    // The end-of-sequence token is an all-zero vector; it is not checked for
    // the second node so every generated graph has at least two nodes.
    if (eos && q >= 2 && std::all_of(recent.begin(), recent.end(), [](auto b) { return b == 0; })) break;
    std::vector<std::uint8_t> s(recent.rbegin(), recent.rend());
    seq.vectors.push_back(std::move(s));
  }
  seq.n = seq.vectors.size();
  return sequence_to_graph(seq);
}

std::vector<LabeledGraph> sample(const Checkpoint& cp, std::size_t count, SeededRng& rng) {
  cp.config.validate();
  const std::uint64_t base = rng.next_u64();
  std::vector<LabeledGraph> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SeededRng stream(derive_seed(base, "sample", i));
    out.push_back(sample_one(cp.params, cp.config, cp.metadata.label, stream));
  }
  return out;
}

bool passes_density_filter(const LabeledGraph& g, double min_density, double max_density) {
  const std::size_t n = g.node_count();
  if (n < 2) return false;
  const double possible = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double density = static_cast<double>(g.edge_count()) / possible;
  return density >= min_density && density <= max_density;
}

AcceptedSamples sample_accepted(const Checkpoint& cp, std::size_t count, SeededRng& rng,
                                std::size_t max_attempts) {
  cp.config.validate();
  if (max_attempts == 0) max_attempts = std::max<std::size_t>(100, 20 * count);
  const std::uint64_t base = rng.next_u64();
  AcceptedSamples res;
  std::size_t draw = 0;
  while (res.graphs.size() < count) {
    if (draw >= max_attempts) {
      throw RuntimeFailure("sample_accepted: only " + std::to_string(res.graphs.size()) + " of " +
                           std::to_string(count) + " samples passed the density filter after " +
                           std::to_string(draw) + " draws");
    }
    SeededRng stream(derive_seed(base, "sample", draw++));
    LabeledGraph g = sample_one(cp.params, cp.config, cp.metadata.label, stream);
    if (passes_density_filter(g, cp.config.min_density, cp.config.max_density)) {
      res.graphs.push_back(std::move(g));
    } else {
      ++res.rejected;
    }
  }
  return res;
}

// ---------------------------------------------------------- checkpoint ----

namespace {

using nlohmann::json;

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(json(std::vector<double>(row.begin(), row.end())));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

DenseMatrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const json& data = j.at("data");
  if (!data.is_array() || data.size() != rows) throw ValidationError("checkpoint: matrix row count mismatch");
  DenseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = data[r].get<std::vector<double>>();
    if (row.size() != cols) throw ValidationError("checkpoint: matrix column count mismatch");
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

json mlp_to_json(const MlpParams& p) {
  json layers = json::array();
  for (const auto& l : p.layers) {
    layers.push_back(
        {{"weight", matrix_to_json(l.weight)}, {"bias", l.bias}, {"activation", std::string(to_string(l.activation))}});
  }
  return layers;
}

MlpParams mlp_from_json(const json& j) {
  MlpParams p;
  for (const auto& l : j) {
    DenseLayer layer;
    layer.weight = matrix_from_json(l.at("weight"));
    layer.bias = l.at("bias").get<Vector>();
    layer.activation = activation_from_string(l.at("activation").get<std::string>());
    if (layer.bias.size() != layer.weight.rows()) throw ValidationError("checkpoint: bias size mismatch");
    p.layers.push_back(std::move(layer));
  }
  return p;
}

json gru_to_json(const GruCellParams& p) {
  return json{{"input_dim", p.input_dim}, {"hidden_dim", p.hidden_dim},
              {"w_z", matrix_to_json(p.w_z)}, {"w_r", matrix_to_json(p.w_r)}, {"w_h", matrix_to_json(p.w_h)},
              {"u_z", matrix_to_json(p.u_z)}, {"u_r", matrix_to_json(p.u_r)}, {"u_h", matrix_to_json(p.u_h)},
              {"b_z", p.b_z}, {"b_r", p.b_r}, {"b_h", p.b_h}};
}

GruCellParams gru_from_json(const json& j) {
  GruCellParams p = GruCellParams::zeros(j.at("input_dim").get<std::size_t>(), j.at("hidden_dim").get<std::size_t>());
  for (auto [name, m] : {std::pair{"w_z", &p.w_z}, {"w_r", &p.w_r}, {"w_h", &p.w_h},
                         {"u_z", &p.u_z}, {"u_r", &p.u_r}, {"u_h", &p.u_h}}) {
    DenseMatrix loaded = matrix_from_json(j.at(name));
    if (loaded.rows() != m->rows() || loaded.cols() != m->cols()) {
      throw ValidationError(std::string("checkpoint: GRU matrix ") + name + " has wrong shape");
    }
    *m = std::move(loaded);
  }
  for (auto [name, v] : {std::pair{"b_z", &p.b_z}, {"b_r", &p.b_r}, {"b_h", &p.b_h}}) {
    Vector loaded = j.at(name).get<Vector>();
    if (loaded.size() != v->size()) throw ValidationError(std::string("checkpoint: GRU bias ") + name + " has wrong size");
    *v = std::move(loaded);
  }
  return p;
}

void check_param_shapes(const GraphRnnParams& loaded, const GraphRnnConfig& config) {
  GraphRnnParams expected = GraphRnnParams::zeros(config);
  GraphRnnParams copy = loaded;
  const TensorRefs a = expected.tensors();
  const TensorRefs b = copy.tensors();
  bool ok = a.size() == b.size();
  for (std::size_t i = 0; ok && i < a.size(); ++i) ok = a[i].size() == b[i].size();
  if (!ok) throw ValidationError("checkpoint: parameter shapes do not match the stored config");
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& cp) {
  json params{{"embed", mlp_to_json(cp.params.embed)},
              {"graph_gru", gru_to_json(cp.params.graph_gru)},
              {"h0", cp.params.h0}};
  if (cp.config.variant == HeadVariant::mlp_head) {
    params["head"] = mlp_to_json(cp.params.head);
  } else {
    params["edge_init"] = mlp_to_json(cp.params.edge_init);
    params["edge_gru"] = gru_to_json(cp.params.edge_gru);
    params["edge_out"] = mlp_to_json(cp.params.edge_out);
  }
  const auto& m = cp.metadata;
  json doc{{"format_version", kCheckpointFormatVersion},
           {"config", graphrnn_config_to_json(cp.config)},
           {"params", std::move(params)},
           {"metadata",
            {{"epochs_completed", m.epochs_completed},
             {"final_loss", m.final_loss},
             {"seed", m.seed},
             {"label", std::string(to_string(m.label))},
             {"cohort_size", m.cohort_size}}}};
  return doc.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("checkpoint: malformed JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ValidationError("checkpoint: top level must be an object");
    const int version = doc.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw ValidationError("checkpoint: unsupported format_version " + std::to_string(version));
    }
    Checkpoint cp;
    cp.config = graphrnn_config_from_json(doc.at("config"));
    const json& p = doc.at("params");
    cp.params.embed = mlp_from_json(p.at("embed"));
    cp.params.graph_gru = gru_from_json(p.at("graph_gru"));
    cp.params.h0 = p.at("h0").get<Vector>();
    if (cp.config.variant == HeadVariant::mlp_head) {
      cp.params.head = mlp_from_json(p.at("head"));
    } else {
      cp.params.edge_init = mlp_from_json(p.at("edge_init"));
      cp.params.edge_gru = gru_from_json(p.at("edge_gru"));
      cp.params.edge_out = mlp_from_json(p.at("edge_out"));
    }
    check_param_shapes(cp.params, cp.config);
    const json& m = doc.at("metadata");
    cp.metadata.epochs_completed = m.at("epochs_completed").get<std::size_t>();
    cp.metadata.final_loss = m.at("final_loss").get<double>();
    cp.metadata.seed = m.at("seed").get<std::uint64_t>();
    cp.metadata.label = label_from_string(m.at("label").get<std::string>());
    cp.metadata.cohort_size = m.at("cohort_size").get<std::size_t>();
    return cp;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << checkpoint_to_json(cp);
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_json(ss.str());
}

}  // namespace brainaug
