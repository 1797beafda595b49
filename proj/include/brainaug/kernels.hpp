#pragma once

// Hand-written neural building blocks with explicit backward passes:
// GRU cell, dense MLP, sigmoid + binary cross-entropy, Adam, global-norm
// clipping and a central-difference gradient checker.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "brainaug/dense.hpp"
#include "brainaug/rng.hpp"

namespace brainaug {

// A list of parameter (or gradient) buffers in a fixed visiting order.
using TensorRefs = std::vector<std::span<double>>;

double sigmoid(double x);

// ---------------------------------------------------------------- GRU ----

struct GruCellParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  DenseMatrix w_z, w_r, w_h;  // hidden x input
  DenseMatrix u_z, u_r, u_h;  // hidden x hidden
  Vector b_z, b_r, b_h;

  static GruCellParams zeros(std::size_t input_dim, std::size_t hidden_dim);
  void init_xavier(SeededRng& rng);

  template <class F>
  void visit(F&& f) {
    f(w_z.flat()); f(w_r.flat()); f(w_h.flat());
    f(u_z.flat()); f(u_r.flat()); f(u_h.flat());
    f(std::span<double>(b_z)); f(std::span<double>(b_r)); f(std::span<double>(b_h));
  }

  friend bool operator==(const GruCellParams&, const GruCellParams&) = default;
};

struct GruCache {
  Vector x, h_prev, z, r, h_cand, r_h;
};

// z = s(W_z x + U_z h + b_z); r = s(W_r x + U_r h + b_r)
// h~ = tanh(W_h x + U_h (r * h) + b_h); h' = (1 - z) * h + z * h~
Vector gru_step(const GruCellParams& p, std::span<const double> h_prev, std::span<const double> x,
                GruCache* cache = nullptr);

// Accumulates parameter gradients into `grads`. dh_prev and dx are
// accumulated into (not overwritten); pass empty spans to skip.
void gru_backward(const GruCellParams& p, const GruCache& cache, std::span<const double> dh_new,
                  GruCellParams& grads, std::span<double> dh_prev, std::span<double> dx);

// ---------------------------------------------------------------- MLP ----

enum class Activation { identity, relu, sigmoid, tanh };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

struct DenseLayer {
  DenseMatrix weight;  // out x in
  Vector bias;
  Activation activation = Activation::identity;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct MlpParams {
  std::vector<DenseLayer> layers;

  // dims = {in, hidden..., out}; activations has dims.size() - 1 entries.
  static MlpParams zeros(std::span<const std::size_t> dims, std::span<const Activation> activations);
  void init_xavier(SeededRng& rng);

  std::size_t input_dim() const { return layers.front().weight.cols(); }
  std::size_t output_dim() const { return layers.back().weight.rows(); }

  template <class F>
  void visit(F&& f) {
    for (auto& layer : layers) {
      f(layer.weight.flat());
      f(std::span<double>(layer.bias));
    }
  }

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

struct MlpCache {
  std::vector<Vector> inputs;   // input to each layer
  std::vector<Vector> outputs;  // post-activation output of each layer
};

Vector mlp_forward(const MlpParams& p, std::span<const double> x, MlpCache* cache = nullptr);

// Backward through the MLP. When `dy_is_logit` is set, dy is taken as the
// gradient with respect to the last layer's pre-activation (used when the
// sigmoid is fused with cross-entropy). dx is accumulated; may be empty.
void mlp_backward(const MlpParams& p, const MlpCache& cache, std::span<const double> dy,
                  MlpParams& grads, std::span<double> dx, bool dy_is_logit = false);

// ---------------------------------------------------------------- BCE ----

inline constexpr double kProbClip = 1e-7;

struct BceResult {
  double loss = 0.0;
  Vector grad;  // d loss / d y_pred
};

// Mean binary cross-entropy over N = y_pred.size() entries. Predictions are
// clipped to [1e-7, 1 - 1e-7] before taking logs.
BceResult bce_loss(std::span<const double> y_pred, std::span<const double> y_true);

// Un-normalized BCE term for one clipped prediction.
double bce_term(double y_pred, double y_true);

// --------------------------------------------------------------- Adam ----

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  AdamState() = default;
  AdamState(AdamConfig config, const TensorRefs& params);

  // Bias-corrected Adam step. Throws RuntimeFailure on a non-finite gradient.
  void update(const TensorRefs& params, const TensorRefs& grads);

  long step_count() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<Vector> m_, v_;
  long t_ = 0;
};

// Scales grads in place so their joint L2 norm is at most max_norm.
// Returns the norm before clipping.
double clip_global_norm(const TensorRefs& grads, double max_norm);

void zero_tensors(const TensorRefs& tensors);
std::size_t total_size(const TensorRefs& tensors);
Vector flatten(const TensorRefs& tensors);
void unflatten(std::span<const double> flat, const TensorRefs& tensors);

// ---------------------------------------------------- gradient checking ----

struct FiniteDiffReport {
  double max_rel_error = 0.0;
  std::size_t worst_coordinate = 0;
  std::size_t coordinates_checked = 0;
};

// three_point: (f(x+h) - f(x-h)) / 2h, error O(h^2).
// five_point: fourth-order central stencil, error O(h^4); allows a larger h
// when f sums many terms and round-off dominates at small steps.
enum class FiniteDiffStencil { three_point, five_point };

// Central differences of f at `point` for each coordinate in `coords`
// (all coordinates when empty), compared with `analytic`. Relative error is
// |a - n| / max(|a|, |n|, 1e-8).
FiniteDiffReport finite_diff_check(const std::function<double(std::span<const double>)>& f,
                                   std::span<const double> point, std::span<const double> analytic,
                                   double h = 1e-5, std::span<const std::size_t> coords = {},
                                   FiniteDiffStencil stencil = FiniteDiffStencil::three_point);

}  // namespace brainaug
