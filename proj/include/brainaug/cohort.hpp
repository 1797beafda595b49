#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "brainaug/connectome.hpp"
#include "brainaug/graph.hpp"
#include "brainaug/rng.hpp"

namespace brainaug {

struct SbmSpec {
  std::size_t n = 0;
  std::vector<std::size_t> blocks;  // block id per node
  double p_in = 0.0;
  double p_out = 0.0;
  Label label = Label::unlabeled;

  // n nodes split into `count` contiguous, near-equal blocks.
  static SbmSpec equal_blocks(std::size_t n, std::size_t count, double p_in, double p_out,
                              Label label = Label::unlabeled);
  std::size_t block_count() const;
  void validate() const;
};

std::vector<LabeledGraph> sample_sbm(const SbmSpec& spec, std::size_t count, SeededRng& rng);

// `rewires` double-edge swap attempts; a swap is rejected when it would
// create a self-loop or a duplicate edge. Degrees are preserved exactly.
LabeledGraph baseline_degree_preserving(const LabeledGraph& reference, std::size_t rewires, SeededRng& rng);

// Degree-preserving swaps accepted only when they strictly reduce
// |avg_clustering - target_cc|.
LabeledGraph baseline_clustering_match(const LabeledGraph& reference, double target_cc, std::size_t iterations,
                                       SeededRng& rng);

struct Cohort {
  std::vector<std::string> subject_ids;
  std::vector<LabeledGraph> graphs;
  std::size_t size() const { return graphs.size(); }
  std::vector<LabeledGraph> with_label(Label label) const;
};

// count_per_class graphs from spec_a labeled autism and from spec_b labeled
// control, in shuffled order.
Cohort make_two_population_cohort(const SbmSpec& spec_a, const SbmSpec& spec_b, std::size_t count_per_class,
                                  SeededRng& rng);

// Directory layout: manifest.csv (subject_id,path,label) + graphs/<id>.edges
void write_graph_cohort(const std::filesystem::path& dir, const Cohort& cohort);
Cohort read_graph_cohort(const std::filesystem::path& dir);

// ROI time series whose correlation structure follows the SBM blocks: each
// ROI mixes a smooth block factor with white noise. Within-block signals
// correlate at roughly `within_corr`.
RoiTimeSeries synth_time_series(const SbmSpec& spec, std::size_t n_timepoints, double tr_seconds,
                                double within_corr, const std::string& subject_id, SeededRng& rng);

}  // namespace brainaug
