#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "brainaug/rng.hpp"

namespace brainaug {

enum class Label { autism, control, unlabeled };

std::string_view to_string(Label label);
Label label_from_string(std::string_view s);

// Undirected simple graph on nodes [0, n) with a class label. Stored as a
// dense symmetric 0/1 matrix; the API refuses self-loops.
class LabeledGraph {
 public:
  LabeledGraph() = default;
  explicit LabeledGraph(std::size_t n, Label label = Label::unlabeled)
      : n_(n), label_(label), adj_(n * n, 0) {}

  std::size_t node_count() const { return n_; }
  Label label() const { return label_; }
  void set_label(Label l) { label_ = l; }

  bool has_edge(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }
  // Throws ValidationError on i == j or out-of-range indices.
  void add_edge(std::size_t i, std::size_t j);
  void remove_edge(std::size_t i, std::size_t j);

  std::size_t edge_count() const { return edges_; }
  std::size_t degree(std::size_t v) const;
  std::vector<std::size_t> neighbors(std::size_t v) const;
  std::vector<std::size_t> degree_sequence() const;
  // Pairs (i, j) with i < j in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  std::size_t n_ = 0;
  Label label_ = Label::unlabeled;
  std::vector<std::uint8_t> adj_;
  std::size_t edges_ = 0;
};

// A permutation of [0, n): perm[position] = node.
struct NodeOrdering {
  std::vector<std::size_t> perm;

  bool is_valid_for(std::size_t n) const;
};

inline constexpr std::size_t kUnboundedLookback = 0;

// BFS-ordered adjacency-vector encoding. vectors[i] (0-based position i) has
// length min(i, lookback) and lists edges to the preceding nodes, oldest
// first: vectors[i][k] = edge(pos i, pos i - len + k).
struct GraphSequence {
  std::size_t n = 0;
  std::size_t lookback = kUnboundedLookback;  // 0 = unbounded
  std::vector<std::vector<std::uint8_t>> vectors;
  Label label = Label::unlabeled;

  std::size_t expected_length(std::size_t position) const;
  friend bool operator==(const GraphSequence&, const GraphSequence&) = default;
};

NodeOrdering bfs_ordering(const LabeledGraph& g, std::size_t start, SeededRng& rng);

GraphSequence graph_to_sequence(const LabeledGraph& g, const NodeOrdering& order,
                                std::size_t lookback = kUnboundedLookback);

LabeledGraph sequence_to_graph(const GraphSequence& seq);

// Largest distance (position - earliest connected predecessor position)
// seen over sampled BFS orderings, plus `margin`.
std::size_t estimate_lookback(std::span<const LabeledGraph> graphs, std::size_t samples_per_graph,
                              SeededRng& rng, std::size_t margin = 0);

// Lookback required by one specific ordering.
std::size_t ordering_lookback(const LabeledGraph& g, const NodeOrdering& order);

// Edge-list text format: "n <count> label <label>" then "i j" per line, i < j.
std::string to_edge_list(const LabeledGraph& g);
LabeledGraph parse_edge_list(std::string_view text, const std::string& source = "<memory>");
void write_edge_list(const std::filesystem::path& path, const LabeledGraph& g);
LabeledGraph read_edge_list(const std::filesystem::path& path);

}  // namespace brainaug
