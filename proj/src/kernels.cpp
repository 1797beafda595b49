#include "brainaug/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "brainaug/error.hpp"

namespace brainaug {

double sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ValidationError(std::string(what) + ": dimension mismatch (got " + std::to_string(got) +
                          ", expected " + std::to_string(want) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------- GRU ----

GruCellParams GruCellParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  GruCellParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.w_z = p.w_r = p.w_h = DenseMatrix(hidden_dim, input_dim);
  p.u_z = p.u_r = p.u_h = DenseMatrix(hidden_dim, hidden_dim);
  p.b_z = p.b_r = p.b_h = Vector(hidden_dim, 0.0);
  return p;
}

void GruCellParams::init_xavier(SeededRng& rng) {
  for (DenseMatrix* m : {&w_z, &w_r, &w_h, &u_z, &u_r, &u_h}) m->init_xavier(rng);
  std::fill(b_z.begin(), b_z.end(), 0.0);
  std::fill(b_r.begin(), b_r.end(), 0.0);
  std::fill(b_h.begin(), b_h.end(), 0.0);
}

Vector gru_step(const GruCellParams& p, std::span<const double> h_prev, std::span<const double> x,
                GruCache* cache) {
  check_dim(x.size(), p.input_dim, "gru_step input");
  check_dim(h_prev.size(), p.hidden_dim, "gru_step hidden");
  const std::size_t hd = p.hidden_dim;

  Vector z = p.b_z, r = p.b_r, a_h = p.b_h;
  gemv_acc(p.w_z, x, z);
  gemv_acc(p.u_z, h_prev, z);
  gemv_acc(p.w_r, x, r);
  gemv_acc(p.u_r, h_prev, r);
  for (std::size_t k = 0; k < hd; ++k) {
    z[k] = sigmoid(z[k]);
    r[k] = sigmoid(r[k]);
  }
  Vector r_h(hd);
  for (std::size_t k = 0; k < hd; ++k) r_h[k] = r[k] * h_prev[k];
  gemv_acc(p.w_h, x, a_h);
  gemv_acc(p.u_h, r_h, a_h);

  Vector h_new(hd);
  for (std::size_t k = 0; k < hd; ++k) {
    a_h[k] = std::tanh(a_h[k]);
    h_new[k] = (1.0 - z[k]) * h_prev[k] + z[k] * a_h[k];
  }
  if (cache != nullptr) {
    cache->x.assign(x.begin(), x.end());
    cache->h_prev.assign(h_prev.begin(), h_prev.end());
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->h_cand = std::move(a_h);
    cache->r_h = std::move(r_h);
  }
  return h_new;
}

void gru_backward(const GruCellParams& p, const GruCache& c, std::span<const double> dh_new,
                  GruCellParams& g, std::span<double> dh_prev, std::span<double> dx) {
  const std::size_t hd = p.hidden_dim;
  check_dim(dh_new.size(), hd, "gru_backward");

  Vector da_h(hd), da_z(hd), da_r(hd);
  Vector dhp(hd, 0.0);
  for (std::size_t k = 0; k < hd; ++k) {
    const double dh = dh_new[k];
    const double z = c.z[k];
    const double hc = c.h_cand[k];
    dhp[k] = dh * (1.0 - z);
    da_h[k] = dh * z * (1.0 - hc * hc);
    da_z[k] = dh * (hc - c.h_prev[k]) * z * (1.0 - z);
  }

  outer_acc(g.w_h, da_h, c.x);
  outer_acc(g.u_h, da_h, c.r_h);
  for (std::size_t k = 0; k < hd; ++k) g.b_h[k] += da_h[k];
  Vector dr_h(hd, 0.0);
  gemv_t_acc(p.u_h, da_h, dr_h);
  for (std::size_t k = 0; k < hd; ++k) {
    const double r = c.r[k];
    dhp[k] += dr_h[k] * r;
    da_r[k] = dr_h[k] * c.h_prev[k] * r * (1.0 - r);
  }

  outer_acc(g.w_z, da_z, c.x);
  outer_acc(g.u_z, da_z, c.h_prev);
  outer_acc(g.w_r, da_r, c.x);
  outer_acc(g.u_r, da_r, c.h_prev);
  for (std::size_t k = 0; k < hd; ++k) {
    g.b_z[k] += da_z[k];
    g.b_r[k] += da_r[k];
  }
  gemv_t_acc(p.u_z, da_z, dhp);
  gemv_t_acc(p.u_r, da_r, dhp);

  if (!dh_prev.empty()) {
    for (std::size_t k = 0; k < hd; ++k) dh_prev[k] += dhp[k];
  }
  if (!dx.empty()) {
    gemv_t_acc(p.w_h, da_h, dx);
    gemv_t_acc(p.w_z, da_z, dx);
    gemv_t_acc(p.w_r, da_r, dx);
  }
}

// ---------------------------------------------------------------- MLP ----

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
  }
  return "identity";
}

Activation activation_from_string(std::string_view s) {
  if (s == "identity") return Activation::identity;
  if (s == "relu") return Activation::relu;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "tanh") return Activation::tanh;
  throw ValidationError("unknown activation '" + std::string(s) + "'");
}

MlpParams MlpParams::zeros(std::span<const std::size_t> dims, std::span<const Activation> activations) {
  if (dims.size() < 2 || activations.size() + 1 != dims.size()) {
    throw ValidationError("MlpParams::zeros: need dims.size() == activations.size() + 1 >= 2");
  }
  MlpParams p;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    p.layers.push_back({DenseMatrix(dims[l + 1], dims[l]), Vector(dims[l + 1], 0.0), activations[l]});
  }
  return p;
}

void MlpParams::init_xavier(SeededRng& rng) {
  for (auto& layer : layers) {
    layer.weight.init_xavier(rng);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
  }
}

namespace {

void apply_activation(Activation a, Vector& v) {
  switch (a) {
    case Activation::identity: break;
    case Activation::relu:
      for (double& x : v) x = x > 0.0 ? x : 0.0;
      break;
    case Activation::sigmoid:
      for (double& x : v) x = sigmoid(x);
      break;
    case Activation::tanh:
      for (double& x : v) x = std::tanh(x);
      break;
  }
}

// Converts d/d(output) into d/d(pre-activation) given the post-activation output.
void activation_backward(Activation a, std::span<const double> out, Vector& d) {
  switch (a) {
    case Activation::identity: break;
    case Activation::relu:
      for (std::size_t k = 0; k < d.size(); ++k) d[k] = out[k] > 0.0 ? d[k] : 0.0;
      break;
    case Activation::sigmoid:
      for (std::size_t k = 0; k < d.size(); ++k) d[k] *= out[k] * (1.0 - out[k]);
      break;
    case Activation::tanh:
      for (std::size_t k = 0; k < d.size(); ++k) d[k] *= 1.0 - out[k] * out[k];
      break;
  }
}

}  // namespace

Vector mlp_forward(const MlpParams& p, std::span<const double> x, MlpCache* cache) {
  if (p.layers.empty()) throw ValidationError("mlp_forward: empty network");
  check_dim(x.size(), p.input_dim(), "mlp_forward input");
  if (cache != nullptr) {
    cache->inputs.clear();
    cache->outputs.clear();
  }
  Vector cur(x.begin(), x.end());
  for (const auto& layer : p.layers) {
    Vector out = layer.bias;
    gemv_acc(layer.weight, cur, out);
    apply_activation(layer.activation, out);
    if (cache != nullptr) {
      cache->inputs.push_back(std::move(cur));
      cache->outputs.push_back(out);
    }
    cur = std::move(out);
  }
  return cur;
}

void mlp_backward(const MlpParams& p, const MlpCache& cache, std::span<const double> dy,
                  MlpParams& grads, std::span<double> dx, bool dy_is_logit) {
  check_dim(dy.size(), p.output_dim(), "mlp_backward");
  Vector d(dy.begin(), dy.end());
  for (std::size_t li = p.layers.size(); li-- > 0;) {
    const auto& layer = p.layers[li];
    if (!(dy_is_logit && li + 1 == p.layers.size())) {
      activation_backward(layer.activation, cache.outputs[li], d);
    }
    auto& g = grads.layers[li];
    outer_acc(g.weight, d, cache.inputs[li]);
    for (std::size_t k = 0; k < d.size(); ++k) g.bias[k] += d[k];
    if (li == 0) {
      if (!dx.empty()) gemv_t_acc(layer.weight, d, dx);
    } else {
      Vector prev(layer.weight.cols(), 0.0);
      gemv_t_acc(layer.weight, d, prev);
      d = std::move(prev);
    }
  }
}

// ---------------------------------------------------------------- BCE ----

double bce_term(double y_pred, double y_true) {
  const double y = std::clamp(y_pred, kProbClip, 1.0 - kProbClip);
  return -(y_true * std::log(y) + (1.0 - y_true) * std::log(1.0 - y));
}

BceResult bce_loss(std::span<const double> y_pred, std::span<const double> y_true) {
  if (y_pred.empty()) throw ValidationError("bce_loss: empty input");
  check_dim(y_true.size(), y_pred.size(), "bce_loss");
  const double inv_n = 1.0 / static_cast<double>(y_pred.size());
  BceResult res;
  res.grad.resize(y_pred.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < y_pred.size(); ++i) {
    const double y = std::clamp(y_pred[i], kProbClip, 1.0 - kProbClip);
    const double t = y_true[i];
    sum += -(t * std::log(y) + (1.0 - t) * std::log(1.0 - y));
    res.grad[i] = -(t / y - (1.0 - t) / (1.0 - y)) * inv_n;
  }
  res.loss = sum * inv_n;
  return res;
}

// --------------------------------------------------------------- Adam ----

AdamState::AdamState(AdamConfig config, const TensorRefs& params) : config_(config) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const auto& p : params) {
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
}

void AdamState::update(const TensorRefs& params, const TensorRefs& grads) {
  if (params.size() != m_.size() || grads.size() != params.size()) {
    throw ValidationError("AdamState::update: parameter list does not match optimizer state");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    check_dim(grads[i].size(), params[i].size(), "AdamState::update");
    for (double g : grads[i]) {
      if (!std::isfinite(g)) throw RuntimeFailure("non-finite gradient; aborting training");
    }
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& m = m_[i];
    auto& v = v_[i];
    const auto g = grads[i];
    auto p = params[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = config_.beta1 * m[k] + (1.0 - config_.beta1) * g[k];
      v[k] = config_.beta2 * v[k] + (1.0 - config_.beta2) * g[k] * g[k];
      const double m_hat = m[k] / bc1;
      const double v_hat = v[k] / bc2;
      p[k] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

double clip_global_norm(const TensorRefs& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& g : grads) sq += dot(g, g);
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (const auto& g : grads) {
      for (double& v : g) v *= scale;
    }
  }
  return norm;
}

void zero_tensors(const TensorRefs& tensors) {
  for (const auto& t : tensors) std::fill(t.begin(), t.end(), 0.0);
}

std::size_t total_size(const TensorRefs& tensors) {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

Vector flatten(const TensorRefs& tensors) {
  Vector out;
  out.reserve(total_size(tensors));
  for (const auto& t : tensors) out.insert(out.end(), t.begin(), t.end());
  return out;
}

void unflatten(std::span<const double> flat, const TensorRefs& tensors) {
  check_dim(flat.size(), total_size(tensors), "unflatten");
  std::size_t off = 0;
  for (const auto& t : tensors) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(off), t.size(), t.begin());
    off += t.size();
  }
}

// ---------------------------------------------------- gradient checking ----

FiniteDiffReport finite_diff_check(const std::function<double(std::span<const double>)>& f,
                                   std::span<const double> point, std::span<const double> analytic,
                                   double h, std::span<const std::size_t> coords, FiniteDiffStencil stencil) {
  check_dim(analytic.size(), point.size(), "finite_diff_check");
  Vector x(point.begin(), point.end());
  FiniteDiffReport report;
  auto check_one = [&](std::size_t i) {
    const double saved = x[i];
    auto at = [&](double offset) {
      x[i] = saved + offset;
      return f(x);
    };
    double numeric = 0.0;
    if (stencil == FiniteDiffStencil::three_point) {
      numeric = (at(h) - at(-h)) / (2.0 * h);
    } else {
      const double d1 = at(h) - at(-h);
      const double d2 = at(2 * h) - at(-2 * h);
      numeric = (8.0 * d1 - d2) / (12.0 * h);
    }
    x[i] = saved;
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
    const double rel = std::abs(analytic[i] - numeric) / denom;
    if (report.coordinates_checked == 0 || rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_coordinate = i;
    }
    ++report.coordinates_checked;
  };
  if (coords.empty()) {
    for (std::size_t i = 0; i < x.size(); ++i) check_one(i);
  } else {
    for (std::size_t i : coords) check_one(i);
  }
  return report;
}

}  // namespace brainaug
