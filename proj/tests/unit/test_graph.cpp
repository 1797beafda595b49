#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "brainaug/cohort.hpp"
#include "brainaug/error.hpp"
#include "brainaug/graph.hpp"
#include "oracles.hpp"

using namespace brainaug;

namespace {

LabeledGraph path_graph(std::size_t n) {
  LabeledGraph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

LabeledGraph star_graph(std::size_t n, std::size_t center) {
  LabeledGraph g(n);
  for (std::size_t v = 0; v < n; ++v)
    if (v != center) g.add_edge(center, v);
  return g;
}

using Bits = std::vector<std::vector<std::uint8_t>>;

// Largest gap between a node's position and the position of its earliest
// neighbor that comes before it, by scanning every pair of positions.
std::size_t brute_lookback(const LabeledGraph& g, const std::vector<std::size_t>& perm) {
  std::size_t best = 0;
  for (std::size_t p = 0; p < perm.size(); ++p) {
    for (std::size_t q = 0; q < p; ++q) {
      if (g.has_edge(perm[p], perm[q])) best = std::max(best, p - q);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("labeled graph invariants") {
  LabeledGraph g(4, Label::control);
  g.add_edge(0, 1);
  g.add_edge(2, 1);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(1, 2));
  CHECK(g.degree(1) == 2);
  CHECK_THROWS_AS(g.add_edge(3, 3), ValidationError);
  CHECK_THROWS_AS(g.add_edge(0, 4), ValidationError);
  g.add_edge(0, 1);
  CHECK(g.edge_count() == 2);
  g.remove_edge(1, 0);
  CHECK(g.edge_count() == 1);
  CHECK(g.edges() == std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}});
  CHECK(label_from_string(to_string(Label::autism)) == Label::autism);
  CHECK_THROWS_AS(label_from_string("patient"), ValidationError);
}

TEST_CASE("BFS ordering") {
  SeededRng rng(1);
  SUBCASE("path from an endpoint is unique") {
    CHECK(bfs_ordering(path_graph(3), 0, rng).perm == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("star from its center") {
    const auto order = bfs_ordering(star_graph(6, 2), 2, rng);
    CHECK(order.perm[0] == 2);
    CHECK(order.is_valid_for(6));
  }
  SUBCASE("disconnected graph restarts at the lowest unvisited node") {
    LabeledGraph g(6);
    g.add_edge(4, 5);
    g.add_edge(1, 2);
    const auto order = bfs_ordering(g, 4, rng);
    CHECK(order.perm == std::vector<std::size_t>{4, 5, 0, 1, 2, 3});
  }
  SUBCASE("deterministic under a seed") {
    SeededRng a(99), b(99);
    SeededRng gen(5);
    const auto g = oracle::erdos_renyi(20, 0.3, gen);
    CHECK(bfs_ordering(g, 3, a).perm == bfs_ordering(g, 3, b).perm);
  }
  SUBCASE("parent positions never decrease along the order") {
    SeededRng gen(6);
    for (int t = 0; t < 50; ++t) {
      const auto g = oracle::erdos_renyi(15, 0.2, gen);
      const auto order = bfs_ordering(g, gen.below(15), rng);
      REQUIRE(order.is_valid_for(15));
      std::size_t last_parent = 0;
      for (std::size_t p = 1; p < 15; ++p) {
        std::size_t q = 0;
        while (q < p && !g.has_edge(order.perm[p], order.perm[q])) ++q;
        if (q == p) continue;  // component root
        CHECK(q >= last_parent);
        last_parent = q;
      }
    }
  }
}

TEST_CASE("graph to sequence") {
  SeededRng rng(2);
  LabeledGraph k3(3);
  k3.add_edge(0, 1);
  k3.add_edge(0, 2);
  k3.add_edge(1, 2);
  const NodeOrdering ident{{0, 1, 2}};
  CHECK(graph_to_sequence(k3, ident).vectors == Bits{{}, {1}, {1, 1}});
  CHECK(graph_to_sequence(k3, NodeOrdering{{2, 0, 1}}).vectors == Bits{{}, {1}, {1, 1}});
  CHECK(graph_to_sequence(path_graph(3), ident).vectors == Bits{{}, {1}, {0, 1}});

  GraphSequence s{3, kUnboundedLookback, Bits{{}, {1}, {1, 1}}, Label::unlabeled};
  CHECK(sequence_to_graph(s) == k3);
  s.vectors = Bits{{}, {0}, {0, 0}};
  CHECK(sequence_to_graph(s) == LabeledGraph(3));
  s.vectors = Bits{{}, {0}, {0}};
  CHECK_THROWS_AS(sequence_to_graph(s), ValidationError);

  SUBCASE("round trip and bit count over random graphs") {
    for (int t = 0; t < 300; ++t) {
      const std::size_t n = 1 + rng.below(30);
      const double p = std::array{0.1, 0.5, 0.9}[rng.below(3)];
      const auto g = oracle::erdos_renyi(n, p, rng);
      const auto order = bfs_ordering(g, rng.below(n), rng);
      const auto seq = graph_to_sequence(g, order);
      std::size_t bits = 0;
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(seq.vectors[i].size() == i);
        for (auto b : seq.vectors[i]) bits += b;
      }
      CHECK(bits == g.edge_count());
      CHECK(sequence_to_graph(seq) == oracle::permute(g, order.perm));
      CHECK(graph_to_sequence(sequence_to_graph(seq), NodeOrdering{[&] {
                                std::vector<std::size_t> id(n);
                                std::iota(id.begin(), id.end(), 0);
                                return id;
                              }()}) == seq);
    }
  }
  SUBCASE("truncation at the ordering's lookback keeps every edge") {
    for (int t = 0; t < 100; ++t) {
      const auto g = oracle::erdos_renyi(20, 0.25, rng);
      const auto order = bfs_ordering(g, 0, rng);
      const std::size_t m = std::max<std::size_t>(1, ordering_lookback(g, order));
      const auto seq = graph_to_sequence(g, order, m);
      for (std::size_t i = 0; i < 20; ++i) CHECK(seq.vectors[i].size() == std::min(i, m));
      CHECK(sequence_to_graph(seq) == oracle::permute(g, order.perm));
    }
  }
}

TEST_CASE("lookback estimation") {
  SeededRng rng(3);
  SUBCASE("paths ordered from an endpoint need one step") {
    const auto g = path_graph(8);
    CHECK(ordering_lookback(g, bfs_ordering(g, 0, rng)) == 1);
    CHECK(ordering_lookback(g, bfs_ordering(g, 7, rng)) == 1);
  }
  SUBCASE("star ordered from a leaf reaches back to the center") {
    const auto g = star_graph(6, 0);
    const auto order = bfs_ordering(g, 3, rng);
    CHECK(ordering_lookback(g, order) == 4);
    CHECK(ordering_lookback(g, bfs_ordering(g, 0, rng)) == 5);
  }
  SUBCASE("matches brute force over the same sampled orderings") {
    const auto spec = SbmSpec::equal_blocks(16, 2, 0.7, 0.1, Label::unlabeled);
    const auto graphs = sample_sbm(spec, 10, rng);
    SeededRng a(77), b(77);
    const std::size_t est = estimate_lookback(graphs, 5, a, 2);
    std::size_t brute = 0;
    for (const auto& g : graphs) {
      for (int s = 0; s < 5; ++s) {
        const auto start = static_cast<std::size_t>(b.below(g.node_count()));
        brute = std::max(brute, brute_lookback(g, bfs_ordering(g, start, b).perm));
      }
    }
    CHECK(est == brute + 2);
  }
  CHECK_THROWS_AS(estimate_lookback({}, 3, rng), ValidationError);
}

TEST_CASE("edge list format") {
  LabeledGraph g(5, Label::autism);
  g.add_edge(0, 4);
  g.add_edge(1, 2);
  const std::string text = to_edge_list(g);
  CHECK(text == "n 5 label autism\n0 4\n1 2\n");
  CHECK(parse_edge_list(text) == g);
  CHECK_THROWS_AS(parse_edge_list("n 5 label autism\n2 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_edge_list("n 5 label autism\n0 5\n"), ValidationError);
  CHECK_THROWS_AS(parse_edge_list("n 5 label autism\n0 1\n0 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_edge_list("nodes 5\n"), ValidationError);

  const auto path = std::filesystem::temp_directory_path() / "brainaug_graph_test.edges";
  write_edge_list(path, g);
  CHECK(read_edge_list(path) == g);
  std::filesystem::remove(path);
}
