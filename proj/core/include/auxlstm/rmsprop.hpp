#pragma once

#include <span>
#include <string>
#include <vector>

#include "auxlstm/tensor.hpp"

namespace auxlstm {

/// Named view of one parameter block and its gradient.
struct ParamBlock {
  std::string name;
  Tensor* value = nullptr;
  const Tensor* grad = nullptr;
};

struct RmsPropConfig {
  double decay = 0.9;
  double epsilon = 1e-8;
  double lr = 0.001;
  // Global-norm clipping threshold; 0 disables clipping.
  double clip_norm = 0.0;
};

/// Per-parameter running mean of squared gradients, one accumulator per block.
struct RmsPropState {
  RmsPropConfig config;
  std::vector<Tensor> mean_square;
};

/// ms <- decay ms + (1 - decay) g^2;  theta <- theta - lr g / sqrt(ms + eps).
/// Accumulators are created lazily on first use. Throws NumericError naming
/// the block when a gradient is not finite; no block is modified then.
void rmsprop_update(RmsPropState& state, std::span<const ParamBlock> blocks);

double global_grad_norm(std::span<const ParamBlock> blocks);

}  // namespace auxlstm
