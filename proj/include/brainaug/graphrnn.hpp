#pragma once

// Autoregressive graph generator over adjacency-vector sequences.
//
// A graph-level GRU consumes the adjacency vector of each node in turn; its
// state parameterizes the distribution of the next node's adjacency vector
// through one of two heads:
//   mlp_head  - an MLP emitting independent Bernoulli probabilities,
//   edge_rnn  - a small GRU whose hidden state is initialized from the graph
//               state and which emits one edge probability per step,
//               conditioned on the previous bits of the same vector.
// Inside the model adjacency vectors are handled in recency order (index 0 is
// the immediately preceding node) so that slots line up across steps; the
// public GraphSequence layout (oldest first) is restored at the boundary.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "brainaug/graph.hpp"
#include "brainaug/kernels.hpp"

namespace brainaug {

enum class HeadVariant { edge_rnn, mlp_head };

// Node order used to turn training graphs into sequences. `bfs` draws a fresh
// BFS ordering from a random start node for every graph in every epoch;
// `identity` keeps the graphs' own node indexing (meaningful when node i is
// the same atlas region in every graph), so sampled graphs share it.
enum class TrainingOrder { bfs, identity };

struct GenerationMode {
  enum class Kind { fixed_n, eos };
  Kind kind = Kind::fixed_n;
  std::size_t n = 116;  // fixed_n only

  static GenerationMode fixed(std::size_t n) { return {Kind::fixed_n, n}; }
  static GenerationMode eos() { return {Kind::eos, 0}; }
  friend bool operator==(const GenerationMode&, const GenerationMode&) = default;
};

struct GraphRnnConfig {
  HeadVariant variant = HeadVariant::edge_rnn;
  TrainingOrder ordering = TrainingOrder::bfs;
  std::size_t embed_dim = 32;
  std::size_t graph_hidden_dim = 64;
  std::size_t edge_hidden_dim = 16;
  std::size_t lookback = kUnboundedLookback;
  std::size_t max_nodes = 128;
  GenerationMode generation = GenerationMode::fixed(116);
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  double grad_clip = 5.0;
  // Sampled graphs with density outside [min_density, max_density] are
  // discarded by sample_accepted().
  double min_density = 0.01;
  double max_density = 0.99;

  void validate() const;
  // Width of the padded adjacency-vector slots (input and head output).
  std::size_t slot_width() const { return lookback == kUnboundedLookback ? max_nodes : lookback; }

  friend bool operator==(const GraphRnnConfig&, const GraphRnnConfig&) = default;
};

struct GraphRnnParams {
  MlpParams embed;          // slot_width -> embed_dim (tanh)
  GruCellParams graph_gru;  // embed_dim -> graph_hidden_dim
  Vector h0;                // learned initial graph state
  // mlp_head
  MlpParams head;           // graph_hidden -> edge_hidden (tanh) -> slot_width (sigmoid)
  // edge_rnn
  MlpParams edge_init;      // graph_hidden -> edge_hidden (identity)
  GruCellParams edge_gru;   // 2 -> edge_hidden; input = (previous bit, start flag)
  MlpParams edge_out;       // edge_hidden -> edge_hidden (tanh) -> 1 (sigmoid)

  static GraphRnnParams zeros(const GraphRnnConfig& config);
  static GraphRnnParams init(const GraphRnnConfig& config, SeededRng& rng);

  template <class F>
  void visit(F&& f) {
    embed.visit(f);
    graph_gru.visit(f);
    f(std::span<double>(h0));
    head.visit(f);
    edge_init.visit(f);
    edge_gru.visit(f);
    edge_out.visit(f);
  }
  TensorRefs tensors();

  friend bool operator==(const GraphRnnParams&, const GraphRnnParams&) = default;
};

struct TrainingMetadata {
  std::size_t epochs_completed = 0;
  double final_loss = 0.0;
  std::uint64_t seed = 0;
  Label label = Label::unlabeled;
  std::size_t cohort_size = 0;

  friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

struct Checkpoint {
  GraphRnnConfig config;
  GraphRnnParams params;
  TrainingMetadata metadata;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Edge probabilities from teacher-forced evaluation of one sequence.
// probabilities[i] predicts the adjacency vector at 0-based position i + 1
// (oldest-first, length min(i + 1, lookback)); in eos mode a final entry
// predicts the all-zero end-of-sequence vector at position n.
struct TeacherForcedOutput {
  std::vector<Vector> probabilities;
};

TeacherForcedOutput forward_teacher_forced(const GraphRnnParams& params, const GraphRnnConfig& config,
                                           const GraphSequence& seq);

struct LossSum {
  double sum = 0.0;      // summed BCE terms
  std::size_t terms = 0;
  double mean() const { return terms == 0 ? 0.0 : sum / static_cast<double>(terms); }
};

// Teacher-forced BCE of one sequence. When `grads` is non-null, adds
// grad_scale * d(sum)/d(params) into it.
LossSum sequence_loss(const GraphRnnParams& params, const GraphRnnConfig& config, const GraphSequence& seq,
                      GraphRnnParams* grads = nullptr, double grad_scale = 1.0);

// Mean BCE over all emitted probabilities of all sequences.
double mean_loss(const GraphRnnParams& params, const GraphRnnConfig& config,
                 std::span<const GraphSequence> seqs);

struct TrainOptions {
  // Called after every epoch with (epoch index, mean loss).
  std::function<void(std::size_t, double)> on_epoch;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<double> loss_curve;  // mean loss per epoch
};

TrainResult train(const GraphRnnConfig& config, std::span<const LabeledGraph> cohort, SeededRng& rng,
                  const TrainOptions& options = {});

// Autoregressive sampling; one independent stream per sample derived from rng.
std::vector<LabeledGraph> sample(const Checkpoint& checkpoint, std::size_t count, SeededRng& rng);
LabeledGraph sample_one(const GraphRnnParams& params, const GraphRnnConfig& config, Label label,
                        SeededRng& rng);

struct AcceptedSamples {
  std::vector<LabeledGraph> graphs;
  std::size_t rejected = 0;
  std::size_t attempts() const { return graphs.size() + rejected; }
};

// Samples until `count` graphs pass the density filter in the config.
// Throws RuntimeFailure after max_attempts draws.
AcceptedSamples sample_accepted(const Checkpoint& checkpoint, std::size_t count, SeededRng& rng,
                                std::size_t max_attempts = 0);

bool passes_density_filter(const LabeledGraph& g, double min_density, double max_density);

inline constexpr int kCheckpointFormatVersion = 1;

std::string checkpoint_to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const std::string& text);
void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace brainaug
