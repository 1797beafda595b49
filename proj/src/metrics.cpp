#include "brainaug/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "brainaug/error.hpp"
#include "brainaug/rng.hpp"

namespace brainaug {

Vector degree_histogram(const LabeledGraph& g) {
  const std::size_t n = g.node_count();
  Vector hist(n, 0.0);
  if (n == 0) return hist;
  for (std::size_t v = 0; v < n; ++v) hist[g.degree(v)] += 1.0;
  for (double& h : hist) h /= static_cast<double>(n);
  return hist;
}

double local_clustering(const LabeledGraph& g, std::size_t v) {
  const auto nbrs = g.neighbors(v);
  const std::size_t d = nbrs.size();
  if (d < 2) return 0.0;
  std::size_t links = 0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) links += g.has_edge(nbrs[a], nbrs[b]) ? 1 : 0;
  }
  return 2.0 * static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1));
}

double avg_clustering(const LabeledGraph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t v = 0; v < n; ++v) sum += local_clustering(g, v);
  return sum / static_cast<double>(n);
}

GraphStats graph_stats(const LabeledGraph& g) {
  GraphStats s;
  s.degree_hist = degree_histogram(g);
  s.avg_clustering = avg_clustering(g);
  s.edges = g.edge_count();
  const std::size_t n = g.node_count();
  s.density = n < 2 ? 0.0 : static_cast<double>(s.edges) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
  return s;
}

namespace {

double sq_dist_padded(const Vector& a, const Vector& b) {
  const std::size_t len = std::max(a.size(), b.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double x = k < a.size() ? a[k] : 0.0;
    const double y = k < b.size() ? b[k] : 0.0;
    acc += (x - y) * (x - y);
  }
  return acc;
}

double mean_kernel(std::span<const Vector> a, std::span<const Vector> b, double inv_two_sigma_sq) {
  double acc = 0.0;
  for (const auto& x : a) {
    for (const auto& y : b) acc += std::exp(-sq_dist_padded(x, y) * inv_two_sigma_sq);
  }
  return acc / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace

double mmd_gaussian(std::span<const Vector> set_a, std::span<const Vector> set_b, double sigma) {
  if (set_a.empty() || set_b.empty()) throw ValidationError("mmd: both sets must be non-empty");
  if (!(sigma > 0.0)) throw ValidationError("mmd: sigma must be positive");
  const double inv = 1.0 / (2.0 * sigma * sigma);
  return mean_kernel(set_a, set_a, inv) + mean_kernel(set_b, set_b, inv) - 2.0 * mean_kernel(set_a, set_b, inv);
}

double mmd_degree(std::span<const LabeledGraph> set_a, std::span<const LabeledGraph> set_b, double sigma) {
  std::vector<Vector> ha, hb;
  ha.reserve(set_a.size());
  hb.reserve(set_b.size());
  for (const auto& g : set_a) ha.push_back(degree_histogram(g));
  for (const auto& g : set_b) hb.push_back(degree_histogram(g));
  return mmd_gaussian(ha, hb, sigma);
}

namespace {

constexpr double kPcaTolerance = 1e-10;
constexpr int kPcaMaxIterations = 10000;

// y = C v with C = X^T X / (N - 1) for the centered data X.
Vector covariance_apply(const std::vector<Vector>& centered, const Vector& v) {
  Vector out(v.size(), 0.0);
  for (const auto& row : centered) {
    const double s = dot(row, v);
    for (std::size_t k = 0; k < v.size(); ++k) out[k] += s * row[k];
  }
  const double denom = centered.size() > 1 ? static_cast<double>(centered.size() - 1) : 1.0;
  for (double& x : out) x /= denom;
  return out;
}

double normalize(Vector& v) {
  const double norm = std::sqrt(dot(v, v));
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return norm;
}

}  // namespace

PcaResult pca_embed_2d(std::span<const Vector> features) {
  if (features.empty()) throw ValidationError("pca_embed_2d: no feature vectors");
  const std::size_t dim = features.front().size();
  if (dim == 0) throw ValidationError("pca_embed_2d: zero-length feature vectors");
  for (const auto& f : features) {
    if (f.size() != dim) throw ValidationError("pca_embed_2d: feature vectors differ in length");
  }

  Vector mean(dim, 0.0);
  for (const auto& f : features) {
    for (std::size_t k = 0; k < dim; ++k) mean[k] += f[k];
  }
  for (double& m : mean) m /= static_cast<double>(features.size());
  std::vector<Vector> centered;
  centered.reserve(features.size());
  for (const auto& f : features) {
    Vector c(dim);
    for (std::size_t k = 0; k < dim; ++k) c[k] = f[k] - mean[k];
    centered.push_back(std::move(c));
  }

  PcaResult res;
  const double denom = features.size() > 1 ? static_cast<double>(features.size() - 1) : 1.0;
  for (const auto& c : centered) res.total_variance += dot(c, c) / denom;

  SeededRng rng(0x5EEDULL);
  for (int comp = 0; comp < 2; ++comp) {
    Vector v(dim);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    normalize(v);
    double lambda = 0.0;
    auto apply = [&](const Vector& x) {
      Vector y = covariance_apply(centered, x);
      if (comp == 1) {
        const double proj = res.explained_variance[0] * dot(res.components[0], x);
        for (std::size_t k = 0; k < dim; ++k) y[k] -= proj * res.components[0][k];
      }
      return y;
    };
    for (int it = 0; it < kPcaMaxIterations; ++it) {
      Vector next = apply(v);
      if (normalize(next) == 0.0) {
        next = v;
        lambda = 0.0;
        break;
      }
      // Fix the sign so convergence is measured on the direction.
      if (dot(next, v) < 0.0) {
        for (double& x : next) x = -x;
      }
      double change = 0.0;
      for (std::size_t k = 0; k < dim; ++k) change += (next[k] - v[k]) * (next[k] - v[k]);
      v = std::move(next);
      if (std::sqrt(change) < kPcaTolerance) break;
    }
    lambda = std::max(0.0, dot(v, apply(v)));
    res.explained_variance[static_cast<std::size_t>(comp)] = lambda;
    res.components[static_cast<std::size_t>(comp)] = std::move(v);
  }

  res.points.reserve(features.size());
  for (const auto& c : centered) res.points.push_back({dot(c, res.components[0]), dot(c, res.components[1])});
  return res;
}

}  // namespace brainaug
