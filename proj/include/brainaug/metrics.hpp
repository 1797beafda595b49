#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "brainaug/dense.hpp"
#include "brainaug/graph.hpp"

namespace brainaug {

// Fraction of nodes with each degree 0..n-1.
Vector degree_histogram(const LabeledGraph& g);

// Mean local clustering; nodes of degree < 2 contribute 0.
double avg_clustering(const LabeledGraph& g);
double local_clustering(const LabeledGraph& g, std::size_t v);

struct GraphStats {
  Vector degree_hist;
  double avg_clustering = 0.0;
  std::size_t edges = 0;
  double density = 0.0;
};

GraphStats graph_stats(const LabeledGraph& g);

// Biased (V-statistic) squared MMD between two sets of degree histograms
// under k(x, y) = exp(-|x - y|^2 / (2 sigma^2)). Histograms are zero-padded
// to a common length.
double mmd_degree(std::span<const LabeledGraph> set_a, std::span<const LabeledGraph> set_b, double sigma = 1.0);
double mmd_gaussian(std::span<const Vector> set_a, std::span<const Vector> set_b, double sigma);

struct PcaResult {
  std::vector<std::array<double, 2>> points;
  std::array<double, 2> explained_variance{};  // eigenvalues of the sample covariance
  double total_variance = 0.0;
  std::array<Vector, 2> components;
};

// Top-2 principal directions by power iteration with deflation
// (tolerance 1e-10, at most 10^4 iterations per direction).
PcaResult pca_embed_2d(std::span<const Vector> features);

}  // namespace brainaug
