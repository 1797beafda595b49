#include "brainaug/connectome.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "brainaug/error.hpp"
#include "csv.hpp"

namespace brainaug {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Sample mean and centered sum of squares of one row.
std::pair<double, double> mean_and_ss(std::span<const double> row) {
  double mean = 0.0;
  for (double v : row) mean += v;
  mean /= static_cast<double>(row.size());
  double ss = 0.0;
  for (double v : row) ss += (v - mean) * (v - mean);
  return {mean, ss};
}

std::string roi_name(const RoiTimeSeries& ts, std::size_t r) {
  if (r < ts.roi_names.size()) return "ROI " + std::to_string(r) + " (" + ts.roi_names[r] + ")";
  return "ROI " + std::to_string(r);
}

}  // namespace

void RoiTimeSeries::validate() const {
  if (n_rois() < 2) throw ValidationError(subject_id + ": need at least 2 ROIs");
  if (n_timepoints() < 3) throw ValidationError(subject_id + ": need at least 3 time points");
  if (!(tr_seconds > 0.0) || !std::isfinite(tr_seconds)) {
    throw ValidationError(subject_id + ": repetition time must be positive");
  }
  for (std::size_t r = 0; r < n_rois(); ++r) {
    for (std::size_t t = 0; t < n_timepoints(); ++t) {
      if (!std::isfinite(signal(r, t))) {
        throw ValidationError(subject_id + ": non-finite value at " + roi_name(*this, r) + ", time " +
                              std::to_string(t));
      }
    }
  }
}

// ----------------------------------------------------------------- I/O ----

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  const auto lines = csv::read_lines(read_file(path));
  if (lines.empty()) throw ValidationError(path.string() + ": empty manifest");
  const auto header = csv::split_line(lines[0]);
  auto col = [&](std::string_view name, bool required) -> long {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) throw ValidationError(path.string() + ": manifest lacks column '" + std::string(name) + "'");
      return -1;
    }
    return it - header.begin();
  };
  const long c_id = col("subject_id", true), c_path = col("path", true), c_label = col("label", true);
  const long c_tr = col("tr_seconds", false);

  std::vector<ManifestEntry> out;
  const auto base = path.parent_path();
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cells = csv::split_line(lines[li]);
    if (cells.size() != header.size()) {
      throw ValidationError(path.string() + ":" + std::to_string(li + 1) + ": expected " +
                            std::to_string(header.size()) + " columns");
    }
    ManifestEntry e;
    e.subject_id = cells[static_cast<std::size_t>(c_id)];
    std::filesystem::path p = cells[static_cast<std::size_t>(c_path)];
    e.path = p.is_absolute() ? p : base / p;
    e.label = label_from_string(cells[static_cast<std::size_t>(c_label)]);
    if (c_tr >= 0 && !csv::parse_double(cells[static_cast<std::size_t>(c_tr)], e.tr_seconds)) {
      throw ValidationError(path.string() + ":" + std::to_string(li + 1) + ": bad tr_seconds");
    }
    out.push_back(std::move(e));
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << "subject_id,path,label,tr_seconds\n";
  for (const auto& e : entries) {
    out << e.subject_id << ',' << e.path.generic_string() << ',' << to_string(e.label) << ','
        << e.tr_seconds << '\n';
  }
}

RoiTimeSeries parse_time_series(std::string_view text, const std::string& source) {
  const auto lines = csv::read_lines(text);
  if (lines.empty()) throw ValidationError(source + ": empty time-series file");
  RoiTimeSeries ts;
  ts.roi_names = csv::split_line(lines[0]);
  for (std::size_t c = 0; c < ts.roi_names.size(); ++c) {
    double dummy = 0.0;
    if (ts.roi_names[c].empty() || csv::parse_double(ts.roi_names[c], dummy)) {
      throw ValidationError(source + ": malformed header at column " + std::to_string(c + 1) +
                            " (expected ROI names)");
    }
  }
  const std::size_t n_rois = ts.roi_names.size();
  const std::size_t n_time = lines.size() - 1;
  ts.signal = DenseMatrix(n_rois, n_time);
  for (std::size_t t = 0; t < n_time; ++t) {
    const auto cells = csv::split_line(lines[t + 1]);
    if (cells.size() != n_rois) {
      throw ValidationError(source + ": row " + std::to_string(t + 2) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(n_rois));
    }
    for (std::size_t c = 0; c < n_rois; ++c) {
      double v = 0.0;
      if (!csv::parse_double(cells[c], v) || !std::isfinite(v)) {
        throw ValidationError(source + ": bad value '" + cells[c] + "' at row " + std::to_string(t + 2) +
                              ", column " + std::to_string(c + 1));
      }
      ts.signal(c, t) = v;
    }
  }
  return ts;
}

RoiTimeSeries load_time_series(const std::filesystem::path& path, const ManifestEntry& entry) {
  RoiTimeSeries ts = parse_time_series(read_file(path), path.string());
  ts.subject_id = entry.subject_id;
  ts.tr_seconds = entry.tr_seconds;
  ts.validate();
  return ts;
}

void write_time_series(const std::filesystem::path& path, const RoiTimeSeries& ts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << std::setprecision(17);
  for (std::size_t r = 0; r < ts.n_rois(); ++r) {
    if (r) out << ',';
    out << (r < ts.roi_names.size() ? ts.roi_names[r] : "roi" + std::to_string(r));
  }
  out << '\n';
  for (std::size_t t = 0; t < ts.n_timepoints(); ++t) {
    for (std::size_t r = 0; r < ts.n_rois(); ++r) {
      if (r) out << ',';
      out << ts.signal(r, t);
    }
    out << '\n';
  }
}

// ------------------------------------------------------- preprocessing ----

RoiTimeSeries global_signal_regression(const RoiTimeSeries& ts) {
  ts.validate();
  const std::size_t n_rois = ts.n_rois(), n_time = ts.n_timepoints();
  Vector g(n_time, 0.0);
  for (std::size_t r = 0; r < n_rois; ++r) {
    for (std::size_t t = 0; t < n_time; ++t) g[t] += ts.signal(r, t);
  }
  for (double& v : g) v /= static_cast<double>(n_rois);
  const auto [g_mean, g_ss] = mean_and_ss(g);
  if (!(g_ss > 0.0)) throw ValidationError(ts.subject_id + ": global signal has zero variance");

  RoiTimeSeries out = ts;
  for (std::size_t r = 0; r < n_rois; ++r) {
    const auto row = ts.signal.row(r);
    const auto [r_mean, r_ss] = mean_and_ss(row);
    if (!(r_ss > 0.0)) throw ValidationError(ts.subject_id + ": zero-variance " + roi_name(ts, r));
    double cov = 0.0;
    for (std::size_t t = 0; t < n_time; ++t) cov += (row[t] - r_mean) * (g[t] - g_mean);
    const double beta = cov / g_ss;
    auto dst = out.signal.row(r);
    for (std::size_t t = 0; t < n_time; ++t) dst[t] = (row[t] - r_mean) - beta * (g[t] - g_mean);
  }
  return out;
}

RoiTimeSeries bandpass_filter(const RoiTimeSeries& ts, double low_hz, double high_hz) {
  ts.validate();
  const double nyquist = 1.0 / (2.0 * ts.tr_seconds);
  if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < nyquist)) {
    throw ValidationError("bandpass_filter: need 0 < low < high < Nyquist (" + std::to_string(nyquist) + " Hz)");
  }
  const std::size_t n = ts.n_timepoints();
  const double span_s = static_cast<double>(n) * ts.tr_seconds;
  std::vector<std::size_t> kept;
  for (std::size_t k = 1; k < n; ++k) {
    const double f = static_cast<double>(std::min(k, n - k)) / span_s;
    if (f >= low_hz && f <= high_hz) kept.push_back(k);
  }
  if (kept.empty()) {
    throw ValidationError("bandpass_filter: no DFT bin falls inside [" + std::to_string(low_hz) + ", " +
                          std::to_string(high_hz) + "] Hz for " + std::to_string(n) + " samples");
  }
  Vector cos_table(n), sin_table(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    cos_table[m] = std::cos(angle);
    sin_table[m] = std::sin(angle);
  }

  RoiTimeSeries out = ts;
  for (std::size_t r = 0; r < ts.n_rois(); ++r) {
    const auto x = ts.signal.row(r);
    auto y = out.signal.row(r);
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t k : kept) {
      double re = 0.0, im = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const std::size_t m = (k * t) % n;
        re += x[t] * cos_table[m];
        im -= x[t] * sin_table[m];
      }
      for (std::size_t t = 0; t < n; ++t) {
        const std::size_t m = (k * t) % n;
        y[t] += re * cos_table[m] - im * sin_table[m];
      }
    }
    for (double& v : y) v /= static_cast<double>(n);
  }
  return out;
}

CorrelationMatrix pearson_matrix(const RoiTimeSeries& ts) {
  ts.validate();
  const std::size_t n = ts.n_rois(), len = ts.n_timepoints();
  DenseMatrix centered(n, len);
  Vector norm(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = ts.signal.row(r);
    const auto [mean, ss] = mean_and_ss(row);
    if (!(ss > 0.0)) throw ValidationError(ts.subject_id + ": zero-variance " + roi_name(ts, r));
    for (std::size_t t = 0; t < len; ++t) centered(r, t) = row[t] - mean;
    norm[r] = std::sqrt(ss);
  }
  CorrelationMatrix corr{DenseMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    corr.values(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double rho = std::clamp(dot(centered.row(i), centered.row(j)) / (norm[i] * norm[j]), -1.0, 1.0);
      corr.values(i, j) = corr.values(j, i) = rho;
    }
  }
  return corr;
}

// --------------------------------------------------------- binarization ----

std::size_t BinaryConnectome::nonzero_count() const {
  return static_cast<std::size_t>(std::count_if(adjacency.begin(), adjacency.end(), [](auto v) { return v != 0; }));
}

std::size_t BinaryConnectome::edge_count() const {
  std::size_t e = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) e += (at(i, j) != 0 || at(j, i) != 0) ? 1 : 0;
  }
  return e;
}

bool BinaryConnectome::is_upper_triangular() const {
  return std::find(provenance.transforms.begin(), provenance.transforms.end(), "upper_triangular") !=
         provenance.transforms.end();
}

LabeledGraph BinaryConnectome::to_graph() const {
  LabeledGraph g(n, label);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (at(i, j) != 0 || at(j, i) != 0) g.add_edge(i, j);
    }
  }
  return g;
}

namespace {

BinaryConnectome threshold_matrix(const CorrelationMatrix& corr, double tau, std::string rule) {
  BinaryConnectome g;
  g.n = corr.n();
  g.adjacency.assign(g.n * g.n, 0);
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = 0; j < g.n; ++j) {
      if (i != j && corr.values(i, j) > tau) g.adjacency[i * g.n + j] = 1;
    }
  }
  g.provenance.threshold_rule = std::move(rule);
  g.provenance.threshold = tau;
  return g;
}

}  // namespace

BinaryConnectome binarize_fixed(const CorrelationMatrix& corr, double tau) {
  if (!(tau > -1.0 && tau < 1.0)) throw ValidationError("binarize_fixed: tau must lie in (-1, 1)");
  return threshold_matrix(corr, tau, "fixed");
}

OtsuResult otsu_threshold(const CorrelationMatrix& corr, std::size_t bins) {
  if (bins < 2) throw ValidationError("otsu_threshold: need at least 2 bins");
  const std::size_t n = corr.n();
  std::vector<double> values;
  values.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) values.push_back(corr.values(i, j));
  }
  if (values.empty()) throw ValidationError("otsu_threshold: no off-diagonal values");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw ValidationError("otsu_threshold: all off-diagonal values are identical");

  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> count(bins, 0.0), sum(bins, 0.0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    b = std::min(b, bins - 1);
    count[b] += 1.0;
    sum[b] += v;
  }
  const double total = static_cast<double>(values.size());
  double total_sum = 0.0;
  for (double s : sum) total_sum += s;

  OtsuResult best;
  bool found = false;
  double c0 = 0.0, s0 = 0.0;
  for (std::size_t j = 1; j < bins; ++j) {
    c0 += count[j - 1];
    s0 += sum[j - 1];
    const double c1 = total - c0;
    if (c0 == 0.0 || c1 == 0.0) continue;
    const double mu0 = s0 / c0;
    const double mu1 = (total_sum - s0) / c1;
    const double var = (c0 / total) * (c1 / total) * (mu0 - mu1) * (mu0 - mu1);
    if (!found || var > best.between_class_variance) {
      best = {lo + static_cast<double>(j) * width, j, var};
      found = true;
    }
  }
  if (!found) throw ValidationError("otsu_threshold: histogram is degenerate");
  return best;
}

BinaryConnectome binarize_otsu(const CorrelationMatrix& corr, std::size_t bins) {
  const OtsuResult res = otsu_threshold(corr, bins);
  return threshold_matrix(corr, res.threshold, "otsu");
}

BinaryConnectome transform_reverse(const BinaryConnectome& g) {
  BinaryConnectome out = g;
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = 0; j < g.n; ++j) {
      out.adjacency[i * g.n + j] = (i == j) ? 0 : static_cast<std::uint8_t>(g.at(i, j) == 0 ? 1 : 0);
    }
  }
  out.provenance.transforms.emplace_back("reverse");
  return out;
}

BinaryConnectome transform_upper_triangular(const BinaryConnectome& g) {
  BinaryConnectome out = g;
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) out.adjacency[i * g.n + j] = 0;
  }
  if (!g.is_upper_triangular()) out.provenance.transforms.emplace_back("upper_triangular");
  return out;
}

}  // namespace brainaug
