#include "brainaug/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "brainaug/error.hpp"
#include "brainaug/metrics.hpp"
#include "csv.hpp"

namespace brainaug {

SbmSpec SbmSpec::equal_blocks(std::size_t n, std::size_t count, double p_in, double p_out, Label label) {
  if (count < 1 || count > n) throw ValidationError("SbmSpec: block count must lie in [1, n]");
  SbmSpec s;
  s.n = n;
  s.p_in = p_in;
  s.p_out = p_out;
  s.label = label;
  s.blocks.resize(n);
  for (std::size_t v = 0; v < n; ++v) s.blocks[v] = v * count / n;
  return s;
}

std::size_t SbmSpec::block_count() const {
  return blocks.empty() ? 0 : *std::max_element(blocks.begin(), blocks.end()) + 1;
}

void SbmSpec::validate() const {
  if (blocks.size() != n) throw ValidationError("SbmSpec: need one block id per node");
  if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0)) {
    throw ValidationError("SbmSpec: probabilities must lie in [0, 1]");
  }
  const std::size_t k = block_count();
  std::vector<bool> used(k, false);
  for (std::size_t b : blocks) used[b] = true;
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw ValidationError("SbmSpec: block ids must cover [0, blocks)");
  }
}

std::vector<LabeledGraph> sample_sbm(const SbmSpec& spec, std::size_t count, SeededRng& rng) {
  spec.validate();
  std::vector<LabeledGraph> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    LabeledGraph g(spec.n, spec.label);
    for (std::size_t i = 0; i < spec.n; ++i) {
      for (std::size_t j = i + 1; j < spec.n; ++j) {
        const double p = spec.blocks[i] == spec.blocks[j] ? spec.p_in : spec.p_out;
        if (rng.bernoulli(p)) g.add_edge(i, j);
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

using Edge = std::pair<std::size_t, std::size_t>;

// Proposes a random double-edge swap (a-b, c-d) -> (a-d, c-b). Returns false
// if the swap is invalid. On success the graph and edge list are updated.
bool try_swap(LabeledGraph& g, std::vector<Edge>& edges, SeededRng& rng, std::size_t& i1, std::size_t& i2) {
  if (edges.size() < 2) return false;
  i1 = static_cast<std::size_t>(rng.below(edges.size()));
  i2 = static_cast<std::size_t>(rng.below(edges.size()));
  if (i1 == i2) return false;
  auto [a, b] = edges[i1];
  auto [c, d] = edges[i2];
  if (rng.bernoulli(0.5)) std::swap(c, d);
  if (a == d || c == b || a == c || b == d) return false;
  if (g.has_edge(a, d) || g.has_edge(c, b)) return false;
  g.remove_edge(a, b);
  g.remove_edge(c, d);
  g.add_edge(a, d);
  g.add_edge(c, b);
  edges[i1] = {std::min(a, d), std::max(a, d)};
  edges[i2] = {std::min(c, b), std::max(c, b)};
  return true;
}

}  // namespace

LabeledGraph baseline_degree_preserving(const LabeledGraph& reference, std::size_t rewires, SeededRng& rng) {
  LabeledGraph g = reference;
  auto edges = g.edges();
  std::size_t i1 = 0, i2 = 0;
  for (std::size_t r = 0; r < rewires; ++r) try_swap(g, edges, rng, i1, i2);
  return g;
}

LabeledGraph baseline_clustering_match(const LabeledGraph& reference, double target_cc, std::size_t iterations,
                                       SeededRng& rng) {
  LabeledGraph g = reference;
  auto edges = g.edges();
  double gap = std::abs(avg_clustering(g) - target_cc);
  std::size_t i1 = 0, i2 = 0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const LabeledGraph before = g;
    const auto edges_before = edges;
    if (!try_swap(g, edges, rng, i1, i2)) continue;
    const double new_gap = std::abs(avg_clustering(g) - target_cc);
    if (new_gap < gap) {
      gap = new_gap;
    } else {
      g = before;
      edges = edges_before;
    }
  }
  return g;
}

std::vector<LabeledGraph> Cohort::with_label(Label label) const {
  std::vector<LabeledGraph> out;
  for (const auto& g : graphs) {
    if (g.label() == label) out.push_back(g);
  }
  return out;
}

Cohort make_two_population_cohort(const SbmSpec& spec_a, const SbmSpec& spec_b, std::size_t count_per_class,
                                  SeededRng& rng) {
  SbmSpec a = spec_a, b = spec_b;
  a.label = Label::autism;
  b.label = Label::control;
  auto ga = sample_sbm(a, count_per_class, rng);
  auto gb = sample_sbm(b, count_per_class, rng);

  struct Item {
    std::string id;
    LabeledGraph g;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < ga.size(); ++i) items.push_back({"a" + std::to_string(i), std::move(ga[i])});
  for (std::size_t i = 0; i < gb.size(); ++i) items.push_back({"c" + std::to_string(i), std::move(gb[i])});
  rng.shuffle(std::span<Item>(items));

  Cohort cohort;
  for (auto& it : items) {
    cohort.subject_ids.push_back(std::move(it.id));
    cohort.graphs.push_back(std::move(it.g));
  }
  return cohort;
}

void write_graph_cohort(const std::filesystem::path& dir, const Cohort& cohort) {
  std::filesystem::create_directories(dir / "graphs");
  std::ofstream manifest(dir / "manifest.csv", std::ios::binary);
  if (!manifest) throw RuntimeFailure("cannot write " + (dir / "manifest.csv").string());
  manifest << "subject_id,path,label\n";
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const std::string rel = "graphs/" + cohort.subject_ids[i] + ".edges";
    write_edge_list(dir / rel, cohort.graphs[i]);
    manifest << cohort.subject_ids[i] << ',' << rel << ',' << to_string(cohort.graphs[i].label()) << '\n';
  }
}

Cohort read_graph_cohort(const std::filesystem::path& dir) {
  const auto manifest = dir / "manifest.csv";
  if (!std::filesystem::exists(manifest)) {
    throw ValidationError("cohort directory " + dir.string() + " has no manifest.csv");
  }
  Cohort cohort;
  for (const auto& entry : read_manifest(manifest)) {
    LabeledGraph g = read_edge_list(entry.path);
    if (g.label() != entry.label) {
      throw ValidationError(entry.path.string() + ": label disagrees with manifest");
    }
    cohort.subject_ids.push_back(entry.subject_id);
    cohort.graphs.push_back(std::move(g));
  }
  return cohort;
}

RoiTimeSeries synth_time_series(const SbmSpec& spec, std::size_t n_timepoints, double tr_seconds,
                                double within_corr, const std::string& subject_id, SeededRng& rng) {
  spec.validate();
  if (!(within_corr >= 0.0 && within_corr < 1.0)) throw ValidationError("synth_time_series: within_corr in [0, 1)");
  const std::size_t k = spec.block_count();
  // Smooth block factors: AR(1) with unit stationary variance.
  const double phi = 0.9;
  const double innov = std::sqrt(1.0 - phi * phi);
  DenseMatrix factors(k, n_timepoints);
  for (std::size_t b = 0; b < k; ++b) {
    double x = rng.gaussian();
    for (std::size_t t = 0; t < n_timepoints; ++t) {
      x = phi * x + innov * rng.gaussian();
      factors(b, t) = x;
    }
  }
  const double load = std::sqrt(within_corr);
  const double noise = std::sqrt(1.0 - within_corr);
  RoiTimeSeries ts;
  ts.subject_id = subject_id;
  ts.atlas_name = "synthetic";
  ts.tr_seconds = tr_seconds;
  ts.signal = DenseMatrix(spec.n, n_timepoints);
  for (std::size_t r = 0; r < spec.n; ++r) {
    ts.roi_names.push_back("roi" + std::to_string(r));
    for (std::size_t t = 0; t < n_timepoints; ++t) {
      ts.signal(r, t) = load * factors(spec.blocks[r], t) + noise * rng.gaussian();
    }
  }
  return ts;
}

}  // namespace brainaug
