#pragma once

#include <cstddef>
#include <span>
#include <type_traits>
#include <utility>

#include "auxlstm/rng.hpp"
#include "auxlstm/tensor.hpp"

namespace auxlstm {

/// Gate blocks are stacked row-wise in the order input, forget, candidate,
/// output. Row block k of `input_weights` is the (hidden x input) matrix of
/// gate k.
enum class Gate : std::size_t { kInput = 0, kForget = 1, kCandidate = 2, kOutput = 3 };

struct LstmParams {
  Tensor input_weights;      // (4H x E)
  Tensor recurrent_weights;  // (4H x H)
  Tensor bias;               // (1 x 4H)
  // Added to the forget gate pre-activation; not trained.
  double forget_bias_offset = 1.0;

  std::size_t hidden() const { return recurrent_weights.cols(); }
  std::size_t input_dim() const { return input_weights.cols(); }

  static LstmParams zeros(std::size_t input_dim, std::size_t hidden, double forget_bias_offset = 1.0);
  /// Weights uniform in (-scale, scale), biases zero.
  static LstmParams uniform(std::size_t input_dim, std::size_t hidden, RngStream& rng,
                            double scale = 0.08, double forget_bias_offset = 1.0);
  LstmParams zeros_like() const;

  /// Throws DimensionError when the gate blocks disagree.
  void validate() const;
};

template <class P, class F>
  requires std::is_same_v<std::remove_const_t<P>, LstmParams>
void visit_blocks(P& p, F&& f) {
  f("input_weights", p.input_weights);
  f("recurrent_weights", p.recurrent_weights);
  f("bias", p.bias);
}

struct LstmState {
  Tensor hidden;
  Tensor cell;

  static LstmState zeros(std::size_t hidden) {
    return {Tensor::vector(hidden), Tensor::vector(hidden)};
  }
  friend bool operator==(const LstmState&, const LstmState&) = default;
};

/// Cotangent of an LstmState.
struct StateGrad {
  Tensor hidden;
  Tensor cell;

  static StateGrad zeros(std::size_t hidden) {
    return {Tensor::vector(hidden), Tensor::vector(hidden)};
  }
  bool is_zero() const;
};

/// Everything the backward pass of one step needs.
struct StepCache {
  Tensor input;      // embedded input x_t
  Tensor h_prev;
  Tensor c_prev;
  Tensor gates;      // post-activation i, f, g, o (1 x 4H)
  Tensor cell;       // c_t
  Tensor tanh_cell;  // tanh(c_t)
  Tensor hidden;     // h_t
};

/// One LSTM update. `cache` and `next` are overwritten; they may be reused
/// across calls to avoid allocation.
void lstm_step_into(const LstmParams& params, const LstmState& state,
                    std::span<const double> input, StepCache& cache, LstmState& next);

std::pair<LstmState, StepCache> lstm_step(const LstmParams& params, const LstmState& state,
                                          const Tensor& input);

/// Backpropagates `next_grad` (cotangent of the state produced by the cached
/// step). Accumulates into `grads` and `input_grad`; overwrites `prev_grad`
/// with the cotangent of the state that entered the step.
void lstm_step_backward(const LstmParams& params, const StepCache& cache,
                        const StateGrad& next_grad, LstmParams& grads,
                        std::span<double> input_grad, StateGrad& prev_grad);

}  // namespace auxlstm
