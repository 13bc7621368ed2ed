#pragma once

#include <cstddef>
#include <span>
#include <type_traits>

#include "auxlstm/rng.hpp"
#include "auxlstm/tensor.hpp"

namespace auxlstm {

/// Two-layer feedforward head: relu(x W1 + b1) W2 + b2, with drop-connect
/// on W2 only.
struct FfnParams {
  Tensor w1;  // (in x hidden)
  Tensor b1;  // (1 x hidden)
  Tensor w2;  // (hidden x out)
  Tensor b2;  // (1 x out)
  double drop_connect_prob = 0.0;

  std::size_t input_dim() const { return w1.rows(); }
  std::size_t hidden_dim() const { return w1.cols(); }
  std::size_t output_dim() const { return w2.cols(); }

  static FfnParams uniform(std::size_t in, std::size_t hidden, std::size_t out, RngStream& rng,
                           double drop_connect_prob, double scale = 0.08);
  FfnParams zeros_like() const;
};

template <class P, class F>
  requires std::is_same_v<std::remove_const_t<P>, FfnParams>
void visit_blocks(P& p, F&& f) {
  f("w1", p.w1);
  f("b1", p.b1);
  f("w2", p.w2);
  f("b2", p.b2);
}

struct FfnCache {
  Tensor input;
  Tensor hidden_pre;
  Tensor hidden_act;
  // Effective second-layer weights used in the forward pass: W2 masked in
  // train mode, W2 * keep probability in eval mode.
  Tensor w2_effective;
  // Drop-connect mask (1 keep, 0 drop); empty when no mask was sampled.
  Tensor mask;
  bool train_mode = false;
};

struct FfnOutput {
  Tensor logits;
  FfnCache cache;
};

/// Train mode samples a fresh Bernoulli(1 - p) keep mask over W2 from `rng`;
/// eval mode scales W2 by the keep probability instead.
FfnOutput classifier_forward(const FfnParams& ffn, std::span<const double> input, RngStream& rng,
                             bool train_mode);

/// Accumulates parameter gradients into `grads`; returns d(loss)/d(input).
Tensor classifier_backward(const FfnParams& ffn, const FfnCache& cache,
                           std::span<const double> logits_grad, FfnParams& grads);

}  // namespace auxlstm
