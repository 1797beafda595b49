#include "brainaug/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "brainaug/error.hpp"

namespace brainaug {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::autism: return "autism";
    case Label::control: return "control";
    case Label::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Label label_from_string(std::string_view s) {
  if (s == "autism") return Label::autism;
  if (s == "control") return Label::control;
  if (s == "unlabeled") return Label::unlabeled;
  throw ValidationError("unknown label '" + std::string(s) + "'");
}

void LabeledGraph::add_edge(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_) throw ValidationError("edge index out of range");
  if (i == j) throw ValidationError("self-loops are not allowed");
  if (adj_[i * n_ + j] == 0) {
    adj_[i * n_ + j] = adj_[j * n_ + i] = 1;
    ++edges_;
  }
}

void LabeledGraph::remove_edge(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_) throw ValidationError("edge index out of range");
  if (adj_[i * n_ + j] != 0) {
    adj_[i * n_ + j] = adj_[j * n_ + i] = 0;
    --edges_;
  }
}

std::size_t LabeledGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < n_; ++j) d += adj_[v * n_ + j];
  return d;
}

std::vector<std::size_t> LabeledGraph::neighbors(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j) {
    if (adj_[v * n_ + j] != 0) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> LabeledGraph::degree_sequence() const {
  std::vector<std::size_t> deg(n_);
  for (std::size_t v = 0; v < n_; ++v) deg[v] = degree(v);
  return deg;
}

std::vector<std::pair<std::size_t, std::size_t>> LabeledGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edges_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (adj_[i * n_ + j] != 0) out.emplace_back(i, j);
    }
  }
  return out;
}

bool NodeOrdering::is_valid_for(std::size_t n) const {
  if (perm.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t v : perm) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::size_t GraphSequence::expected_length(std::size_t position) const {
  return lookback == kUnboundedLookback ? position : std::min(position, lookback);
}

NodeOrdering bfs_ordering(const LabeledGraph& g, std::size_t start, SeededRng& rng) {
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  if (start >= n) throw ValidationError("bfs_ordering: start node out of range");

  NodeOrdering order;
  order.perm.reserve(n);
  std::vector<bool> visited(n, false);
  std::deque<std::size_t> queue;
  std::size_t next_root = 0;
  std::size_t root = start;
  while (true) {
    visited[root] = true;
    queue.push_back(root);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      order.perm.push_back(v);
      std::vector<std::size_t> nbrs;
      for (std::size_t u : g.neighbors(v)) {
        if (!visited[u]) nbrs.push_back(u);
      }
      rng.shuffle(std::span<std::size_t>(nbrs));
      for (std::size_t u : nbrs) {
        visited[u] = true;
        queue.push_back(u);
      }
    }
    while (next_root < n && visited[next_root]) ++next_root;
    if (next_root == n) break;
    root = next_root;
  }
  return order;
}

GraphSequence graph_to_sequence(const LabeledGraph& g, const NodeOrdering& order, std::size_t lookback) {
  const std::size_t n = g.node_count();
  if (!order.is_valid_for(n)) throw ValidationError("graph_to_sequence: ordering is not a permutation");
  GraphSequence seq;
  seq.n = n;
  seq.lookback = lookback;
  seq.label = g.label();
  seq.vectors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = seq.expected_length(i);
    auto& s = seq.vectors[i];
    s.resize(len);
    const std::size_t v = order.perm[i];
    for (std::size_t k = 0; k < len; ++k) {
      s[k] = g.has_edge(v, order.perm[i - len + k]) ? 1 : 0;
    }
  }
  return seq;
}

LabeledGraph sequence_to_graph(const GraphSequence& seq) {
  if (seq.vectors.size() != seq.n) {
    throw ValidationError("sequence_to_graph: vector count " + std::to_string(seq.vectors.size()) +
                          " does not match n = " + std::to_string(seq.n));
  }
  LabeledGraph g(seq.n, seq.label);
  for (std::size_t i = 0; i < seq.n; ++i) {
    const auto& s = seq.vectors[i];
    const std::size_t len = seq.expected_length(i);
    if (s.size() != len) {
      throw ValidationError("sequence_to_graph: vector " + std::to_string(i + 1) + " has length " +
                            std::to_string(s.size()) + ", expected " + std::to_string(len));
    }
    for (std::size_t k = 0; k < len; ++k) {
      if (s[k] > 1) throw ValidationError("sequence_to_graph: entries must be 0 or 1");
      if (s[k] != 0) g.add_edge(i, i - len + k);
    }
  }
  return g;
}

std::size_t ordering_lookback(const LabeledGraph& g, const NodeOrdering& order) {
  const std::size_t n = g.node_count();
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t v = order.perm[i];
    for (std::size_t q = 0; q < i; ++q) {
      if (g.has_edge(v, order.perm[q])) {
        best = std::max(best, i - q);
        break;
      }
    }
  }
  return best;
}

std::size_t estimate_lookback(std::span<const LabeledGraph> graphs, std::size_t samples_per_graph,
                              SeededRng& rng, std::size_t margin) {
  if (graphs.empty()) throw ValidationError("estimate_lookback: empty graph list");
  std::size_t best = 0;
  for (const auto& g : graphs) {
    if (g.node_count() == 0) continue;
    for (std::size_t s = 0; s < samples_per_graph; ++s) {
      const auto start = static_cast<std::size_t>(rng.below(g.node_count()));
      best = std::max(best, ordering_lookback(g, bfs_ordering(g, start, rng)));
    }
  }
  return best + margin;
}

std::string to_edge_list(const LabeledGraph& g) {
  std::ostringstream os;
  os << "n " << g.node_count() << " label " << to_string(g.label()) << '\n';
  for (const auto& [i, j] : g.edges()) os << i << ' ' << j << '\n';
  return os.str();
}

LabeledGraph parse_edge_list(std::string_view text, const std::string& source) {
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line)) throw ValidationError(source + ": empty edge-list file");
  std::istringstream header(line);
  std::string n_tag, label_tag, label_value;
  long long n = -1;
  if (!(header >> n_tag >> n >> label_tag >> label_value) || n_tag != "n" || label_tag != "label" || n < 0) {
    throw ValidationError(source + ": malformed header, expected 'n <count> label <label>'");
  }
  LabeledGraph g(static_cast<std::size_t>(n), label_from_string(label_value));
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long i = -1, j = -1;
    std::string extra;
    if (!(ls >> i >> j) || (ls >> extra) || i < 0 || j < 0 || i >= n || j >= n || i >= j) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": bad edge line '" + line + "'");
    }
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(j);
    if (g.has_edge(a, b)) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": duplicate edge");
    }
    g.add_edge(a, b);
  }
  return g;
}

void write_edge_list(const std::filesystem::path& path, const LabeledGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << to_edge_list(g);
}

LabeledGraph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_edge_list(ss.str(), path.string());
}

}  // namespace brainaug
