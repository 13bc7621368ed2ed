#pragma once

#include <cstddef>

#include "auxlstm/tensor.hpp"

namespace auxlstm {

struct LossAndGrad {
  double loss = 0.0;
  Tensor grad;
};

/// -log softmax(logits)[target], with grad softmax(logits) - onehot(target).
/// Stabilized by subtracting max(logits).
LossAndGrad softmax_cross_entropy(const Tensor& logits, std::size_t target_index);

/// Sum of squared differences; grad is taken w.r.t. `prediction`.
LossAndGrad l2_token_loss(const Tensor& prediction, const Tensor& target);
LossAndGrad l2_token_loss(std::span<const double> prediction, std::span<const double> target);

Tensor softmax(const Tensor& logits);

}  // namespace auxlstm
