// Python bindings. Graphs cross the boundary as square uint8 NumPy
// adjacency matrices; configurations and checkpoints as JSON strings.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "brainaug/cohort.hpp"
#include "brainaug/commands.hpp"
#include "brainaug/config_json.hpp"
#include "brainaug/connectome.hpp"
#include "brainaug/discriminator.hpp"
#include "brainaug/error.hpp"
#include "brainaug/graph.hpp"
#include "brainaug/graphrnn.hpp"
#include "brainaug/metrics.hpp"

namespace py = pybind11;
using namespace brainaug;

namespace {

using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

DenseMatrix to_dense(const F64Array& a) {
  if (a.ndim() != 2) throw ValidationError("expected a 2-D array");
  DenseMatrix m(a.shape(0), a.shape(1));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = r(i, j);
  return m;
}

F64Array from_dense(const DenseMatrix& m) {
  F64Array a({m.rows(), m.cols()});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
  return a;
}

RoiTimeSeries to_series(const F64Array& signal, double tr) {
  RoiTimeSeries ts;
  ts.subject_id = "python";
  ts.tr_seconds = tr;
  ts.signal = to_dense(signal);
  for (std::size_t r = 0; r < ts.n_rois(); ++r) ts.roi_names.push_back("roi" + std::to_string(r));
  return ts;
}

LabeledGraph to_graph(const U8Array& adj, Label label = Label::unlabeled) {
  if (adj.ndim() != 2 || adj.shape(0) != adj.shape(1)) throw ValidationError("adjacency must be square");
  const auto n = static_cast<std::size_t>(adj.shape(0));
  auto r = adj.unchecked<2>();
  LabeledGraph g(n, label);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (r(i, j) != r(j, i)) throw ValidationError("adjacency must be symmetric");
      if (i == j && r(i, j) != 0) throw ValidationError("adjacency must have a zero diagonal");
      if (i < j && r(i, j) != 0) g.add_edge(i, j);
    }
  return g;
}

U8Array from_graph(const LabeledGraph& g) {
  const std::size_t n = g.node_count();
  U8Array a({n, n});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = g.has_edge(i, j) ? 1 : 0;
  return a;
}

U8Array from_connectome(const BinaryConnectome& c) {
  U8Array a({c.n, c.n});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < c.n; ++i)
    for (std::size_t j = 0; j < c.n; ++j) w(i, j) = c.at(i, j);
  return a;
}

std::vector<LabeledGraph> to_graphs(const std::vector<U8Array>& adjs, Label label = Label::unlabeled) {
  std::vector<LabeledGraph> out;
  out.reserve(adjs.size());
  for (const auto& a : adjs) out.push_back(to_graph(a, label));
  return out;
}

std::vector<U8Array> from_graphs(const std::vector<LabeledGraph>& gs) {
  std::vector<U8Array> out;
  out.reserve(gs.size());
  for (const auto& g : gs) out.push_back(from_graph(g));
  return out;
}

CorrelationMatrix to_corr(const F64Array& a) { return CorrelationMatrix{to_dense(a)}; }

Label parse_label(const std::string& s) { return label_from_string(s); }

py::dict report_dict(const EvalReport& r) {
  py::list roc;
  for (const auto& p : r.roc_points) roc.append(py::make_tuple(p.threshold, p.fpr, p.tpr));
  py::dict d;
  d["accuracy"] = r.accuracy;
  d["auc"] = r.auc;
  d["roc"] = roc;
  d["confusion"] = py::dict(py::arg("tp") = r.confusion.true_positive, py::arg("fp") = r.confusion.false_positive,
                            py::arg("tn") = r.confusion.true_negative, py::arg("fn") = r.confusion.false_negative);
  return d;
}

nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

// Without a generation block, n comes from the training graphs.
GraphRnnConfig parse_generator(const std::string& text) {
  const nlohmann::json j = parse_json(text);
  GraphRnnConfig cfg = graphrnn_config_from_json(j);
  if (!j.contains("generation")) cfg.generation = default_cli_generator().generation;
  return cfg;
}

ExperimentConfig parse_experiment(const std::string& text) { return experiment_config_from_json(parse_json(text)); }

}  // namespace

PYBIND11_MODULE(_brainaug, m) {
  m.doc() = "Brain-connectome graph generation and augmentation";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<RuntimeFailure>(m, "RuntimeFailure", PyExc_RuntimeError);

  // Connectome construction.
  m.def(
      "pearson_matrix", [](const F64Array& signal) { return from_dense(pearson_matrix(to_series(signal, 2.0)).values); },
      py::arg("signal"), "ROI x time signal -> ROI x ROI Pearson correlation.");
  m.def(
      "global_signal_regression",
      [](const F64Array& signal) { return from_dense(global_signal_regression(to_series(signal, 2.0)).signal); },
      py::arg("signal"));
  m.def(
      "bandpass_filter",
      [](const F64Array& signal, double tr, double low, double high) {
        return from_dense(bandpass_filter(to_series(signal, tr), low, high).signal);
      },
      py::arg("signal"), py::arg("tr_seconds") = 2.0, py::arg("low_hz") = 0.01, py::arg("high_hz") = 0.1);
  m.def(
      "binarize_fixed", [](const F64Array& corr, double tau) { return from_connectome(binarize_fixed(to_corr(corr), tau)); },
      py::arg("corr"), py::arg("tau"));
  m.def(
      "otsu_threshold",
      [](const F64Array& corr, std::size_t bins) {
        const auto r = otsu_threshold(to_corr(corr), bins);
        return py::make_tuple(r.threshold, r.boundary, r.between_class_variance);
      },
      py::arg("corr"), py::arg("bins") = 256, "Returns (threshold, boundary index, between-class variance).");
  m.def(
      "binarize_otsu", [](const F64Array& corr, std::size_t bins) { return from_connectome(binarize_otsu(to_corr(corr), bins)); },
      py::arg("corr"), py::arg("bins") = 256);

  // Graph encoding.
  m.def(
      "bfs_ordering",
      [](const U8Array& adj, std::size_t start, std::uint64_t seed) {
        SeededRng rng(seed);
        return bfs_ordering(to_graph(adj), start, rng).perm;
      },
      py::arg("adjacency"), py::arg("start") = 0, py::arg("seed") = 0);
  m.def(
      "graph_to_sequence",
      [](const U8Array& adj, const std::vector<std::size_t>& order, std::size_t lookback) {
        return graph_to_sequence(to_graph(adj), NodeOrdering{order}, lookback).vectors;
      },
      py::arg("adjacency"), py::arg("order"), py::arg("lookback") = 0,
      "Adjacency vectors, oldest predecessor first; lookback 0 means unbounded.");
  m.def(
      "sequence_to_graph",
      [](const std::vector<std::vector<std::uint8_t>>& vectors, std::size_t lookback) {
        GraphSequence seq;
        seq.n = vectors.size();
        seq.lookback = lookback;
        seq.vectors = vectors;
        return from_graph(sequence_to_graph(seq));
      },
      py::arg("vectors"), py::arg("lookback") = 0);

  // Synthetic cohorts and baselines.
  m.def(
      "sample_sbm",
      [](std::size_t n, std::size_t blocks, double p_in, double p_out, std::size_t count, std::uint64_t seed) {
        SeededRng rng(seed);
        return from_graphs(sample_sbm(SbmSpec::equal_blocks(n, blocks, p_in, p_out), count, rng));
      },
      py::arg("n"), py::arg("blocks"), py::arg("p_in"), py::arg("p_out"), py::arg("count"), py::arg("seed") = 0);
  m.def(
      "baseline_degree_preserving",
      [](const U8Array& adj, std::size_t rewires, std::uint64_t seed) {
        SeededRng rng(seed);
        return from_graph(baseline_degree_preserving(to_graph(adj), rewires, rng));
      },
      py::arg("adjacency"), py::arg("rewires"), py::arg("seed") = 0);
  m.def(
      "baseline_clustering_match",
      [](const U8Array& adj, double target, std::size_t iterations, std::uint64_t seed) {
        SeededRng rng(seed);
        return from_graph(baseline_clustering_match(to_graph(adj), target, iterations, rng));
      },
      py::arg("adjacency"), py::arg("target_cc"), py::arg("iterations"), py::arg("seed") = 0);

  // Generator.
  m.def(
      "train_generator",
      [](const std::vector<U8Array>& graphs, const std::string& config_json, const std::string& label,
         std::uint64_t seed) {
        auto gs = to_graphs(graphs, parse_label(label));
        if (gs.empty()) throw ValidationError("train_generator: no graphs");
        GraphRnnConfig cfg = parse_generator(config_json);
        cfg.seed = seed;
        cfg = resolve_generator_config(cfg, gs.front().node_count());
        SeededRng rng(seed);
        TrainResult res;
        {
          py::gil_scoped_release release;
          res = train(cfg, gs, rng);
        }
        return py::make_tuple(checkpoint_to_json(res.checkpoint), res.loss_curve);
      },
      py::arg("graphs"), py::arg("config_json") = "{}", py::arg("label") = "unlabeled", py::arg("seed") = 0,
      "Returns (checkpoint JSON, per-epoch mean loss).");
  m.def(
      "sample_generator",
      [](const std::string& checkpoint_json, std::size_t count, std::uint64_t seed) {
        const Checkpoint cp = checkpoint_from_json(checkpoint_json);
        SeededRng rng(seed);
        return from_graphs(sample_accepted(cp, count, rng).graphs);
      },
      py::arg("checkpoint_json"), py::arg("count"), py::arg("seed") = 0);
  m.def(
      "zero_init_loss",
      [](const std::vector<U8Array>& graphs, const std::string& config_json, std::uint64_t seed) {
        GraphRnnConfig cfg = parse_generator(config_json);
        const auto gs = to_graphs(graphs);
        if (gs.empty()) throw ValidationError("zero_init_loss: no graphs");
        cfg = resolve_generator_config(cfg, gs.front().node_count());
        SeededRng rng(seed);
        std::vector<GraphSequence> seqs;
        for (const auto& g : gs) seqs.push_back(graph_to_sequence(g, bfs_ordering(g, 0, rng), cfg.lookback));
        return mean_loss(GraphRnnParams::zeros(cfg), cfg, seqs);
      },
      py::arg("graphs"), py::arg("config_json") = "{}", py::arg("seed") = 0);

  // Metrics.
  m.def("degree_histogram", [](const U8Array& adj) { return degree_histogram(to_graph(adj)); }, py::arg("adjacency"));
  m.def("avg_clustering", [](const U8Array& adj) { return avg_clustering(to_graph(adj)); }, py::arg("adjacency"));
  m.def(
      "mmd_degree",
      [](const std::vector<U8Array>& a, const std::vector<U8Array>& b, double sigma) {
        return mmd_degree(to_graphs(a), to_graphs(b), sigma);
      },
      py::arg("set_a"), py::arg("set_b"), py::arg("sigma") = 1.0);
  m.def(
      "pca_embed_2d",
      [](const F64Array& features) {
        const DenseMatrix x = to_dense(features);
        std::vector<Vector> rows;
        for (std::size_t i = 0; i < x.rows(); ++i) rows.emplace_back(x.row(i).begin(), x.row(i).end());
        const auto r = pca_embed_2d(rows);
        DenseMatrix pts(r.points.size(), 2);
        for (std::size_t i = 0; i < r.points.size(); ++i) {
          pts(i, 0) = r.points[i][0];
          pts(i, 1) = r.points[i][1];
        }
        return py::make_tuple(from_dense(pts), py::make_tuple(r.explained_variance[0], r.explained_variance[1]));
      },
      py::arg("features"), "Returns (points, (variance_1, variance_2)).");

  // Evaluation.
  m.def("featurize", [](const U8Array& adj) { return featurize(to_graph(adj)); }, py::arg("adjacency"));
  m.def(
      "evaluate_scores",
      [](const std::vector<double>& scores, const std::vector<double>& labels) {
        return report_dict(evaluate_scores(scores, labels));
      },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "run_augmentation_protocol",
      [](const std::vector<U8Array>& raw, const std::vector<std::string>& raw_labels,
         const std::vector<U8Array>& generated, const std::vector<std::string>& generated_labels,
         const std::string& classifier_json, double ratio, std::uint64_t seed) {
        if (raw.size() != raw_labels.size() || generated.size() != generated_labels.size())
          throw ValidationError("graphs and labels differ in length");
        std::vector<LabeledGraph> r, g;
        for (std::size_t i = 0; i < raw.size(); ++i) r.push_back(to_graph(raw[i], parse_label(raw_labels[i])));
        for (std::size_t i = 0; i < generated.size(); ++i)
          g.push_back(to_graph(generated[i], parse_label(generated_labels[i])));
        const ClassifierConfig cfg = classifier_config_from_json(parse_json(classifier_json));
        SeededRng rng(seed);
        ProtocolResult res;
        {
          py::gil_scoped_release release;
          res = run_augmentation_protocol(r, g, cfg, ratio, rng);
        }
        py::dict out;
        for (const auto& a : res.arms) out[py::str(std::string(to_string(a.arm)))] = report_dict(a.report);
        return out;
      },
      py::arg("raw"), py::arg("raw_labels"), py::arg("generated"), py::arg("generated_labels"),
      py::arg("classifier_json") = "{}", py::arg("ratio") = 0.6, py::arg("seed") = 0);

  // Pipeline commands.
  m.def(
      "synth",
      [](const std::string& config_json, const std::filesystem::path& out) {
        const auto rep = cmd_synth(parse_experiment(config_json), {out});
        return py::make_tuple(rep.graphs, rep.probe_accuracy);
      },
      py::arg("config_json"), py::arg("out"), "Returns (graph count, linear-probe accuracy).");
  m.def(
      "experiment",
      [](const std::string& config_json, const std::filesystem::path& out) {
        const ExperimentConfig cfg = parse_experiment(config_json);
        std::vector<ExperimentCell> cells;
        {
          py::gil_scoped_release release;
          cells = cmd_experiment(cfg, {out});
        }
        py::list rows;
        for (const auto& c : cells) {
          py::dict d;
          d["arm"] = std::string(to_string(c.arm));
          d["ratio"] = c.ratio;
          d["accuracy"] = c.accuracy;
          d["auc"] = c.auc;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config_json"), py::arg("out"));
  m.def(
      "read_graph_cohort",
      [](const std::filesystem::path& dir) {
        const Cohort c = read_graph_cohort(dir);
        std::vector<std::string> labels;
        for (const auto& g : c.graphs) labels.emplace_back(to_string(g.label()));
        return py::make_tuple(c.subject_ids, from_graphs(c.graphs), labels);
      },
      py::arg("directory"), "Returns (subject ids, adjacency matrices, labels).");
}
