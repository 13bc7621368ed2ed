#include "auxlstm/rmsprop.hpp"

#include <cmath>

#include "auxlstm/errors.hpp"

namespace auxlstm {

double global_grad_norm(std::span<const ParamBlock> blocks) {
  double s = 0.0;
  for (const auto& b : blocks) s += squared_norm(b.grad->data());
  return std::sqrt(s);
}

void rmsprop_update(RmsPropState& state, std::span<const ParamBlock> blocks) {
  for (const auto& b : blocks) {
    require_same_shape(*b.value, *b.grad, b.name.c_str());
    if (!b.grad->all_finite()) {
      throw NumericError("rmsprop_update: non-finite gradient in block '" + b.name + "'");
    }
  }
  if (state.mean_square.empty()) {
    state.mean_square.reserve(blocks.size());
    for (const auto& b : blocks) state.mean_square.emplace_back(b.value->shape());
  }
  if (state.mean_square.size() != blocks.size()) {
    throw DimensionError("rmsprop_update: optimizer holds " +
                         std::to_string(state.mean_square.size()) + " accumulators for " +
                         std::to_string(blocks.size()) + " blocks");
  }

  const RmsPropConfig& cfg = state.config;
  double scale = 1.0;
  if (cfg.clip_norm > 0.0) {
    const double norm = global_grad_norm(blocks);
    if (norm > cfg.clip_norm) scale = cfg.clip_norm / norm;
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Tensor& ms = state.mean_square[i];
    require_same_shape(ms, *blocks[i].value, blocks[i].name.c_str());
    auto theta = blocks[i].value->data();
    auto g = blocks[i].grad->data();
    auto m = ms.data();
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const double gj = g[j] * scale;
      m[j] = cfg.decay * m[j] + (1.0 - cfg.decay) * gj * gj;
      theta[j] -= cfg.lr * gj / std::sqrt(m[j] + cfg.epsilon);
    }
  }
}

}  // namespace auxlstm
