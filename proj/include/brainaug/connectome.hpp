#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "brainaug/dense.hpp"
#include "brainaug/graph.hpp"

namespace brainaug {

// Per-subject ROI signals, n_rois x n_timepoints.
struct RoiTimeSeries {
  std::string subject_id;
  std::string atlas_name;
  double tr_seconds = 1.0;
  std::vector<std::string> roi_names;
  DenseMatrix signal;

  std::size_t n_rois() const { return signal.rows(); }
  std::size_t n_timepoints() const { return signal.cols(); }

  // Shape, finiteness and TR checks. Zero-variance rows are not checked here.
  void validate() const;
};

struct CorrelationMatrix {
  DenseMatrix values;
  std::size_t n() const { return values.rows(); }
};

struct Provenance {
  std::string subject_id;
  std::string threshold_rule;  // "fixed" or "otsu"
  double threshold = 0.0;      // edge iff corr > threshold
  std::vector<std::string> transforms;
};

// 0/1 adjacency with label. Symmetric with zero diagonal unless
// "upper_triangular" appears in provenance.transforms, in which case the
// lower triangle is zero instead.
struct BinaryConnectome {
  std::size_t n = 0;
  std::vector<std::uint8_t> adjacency;
  Label label = Label::unlabeled;
  Provenance provenance;

  std::uint8_t at(std::size_t i, std::size_t j) const { return adjacency[i * n + j]; }
  std::size_t nonzero_count() const;
  // Unordered pairs {i, j} with an entry in either triangle.
  std::size_t edge_count() const;
  bool is_upper_triangular() const;

  LabeledGraph to_graph() const;
};

struct ManifestEntry {
  std::string subject_id;
  std::filesystem::path path;
  Label label = Label::unlabeled;
  double tr_seconds = 2.0;
};

// Columns subject_id, path, label, tr_seconds. Relative paths resolve
// against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

// Header row of ROI names, then one row per time point.
RoiTimeSeries parse_time_series(std::string_view csv, const std::string& source);
RoiTimeSeries load_time_series(const std::filesystem::path& path, const ManifestEntry& entry);
void write_time_series(const std::filesystem::path& path, const RoiTimeSeries& ts);

// Residual of each ROI row after least-squares regression onto [1, g],
// g = mean over ROIs.
RoiTimeSeries global_signal_regression(const RoiTimeSeries& ts);

// Ideal DFT-domain band-pass: bins with |f| outside [low_hz, high_hz] zeroed.
RoiTimeSeries bandpass_filter(const RoiTimeSeries& ts, double low_hz = 0.01, double high_hz = 0.1);

CorrelationMatrix pearson_matrix(const RoiTimeSeries& ts);

BinaryConnectome binarize_fixed(const CorrelationMatrix& corr, double tau);

struct OtsuResult {
  double threshold = 0.0;
  std::size_t boundary = 0;  // chosen bin boundary index in [1, bins)
  double between_class_variance = 0.0;
};

// Otsu over off-diagonal upper-triangle values with `bins` equal-width bins.
OtsuResult otsu_threshold(const CorrelationMatrix& corr, std::size_t bins = 256);
BinaryConnectome binarize_otsu(const CorrelationMatrix& corr, std::size_t bins = 256);

BinaryConnectome transform_reverse(const BinaryConnectome& g);
BinaryConnectome transform_upper_triangular(const BinaryConnectome& g);

}  // namespace brainaug
