#include "auxlstm/losses.hpp"

#include <algorithm>
#include <cmath>

#include "auxlstm/errors.hpp"

namespace auxlstm {

Tensor softmax(const Tensor& logits) {
  Tensor out(logits.shape());
  if (logits.empty()) return out;
  const double mx = *std::max_element(logits.data().begin(), logits.data().end());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    z += out[i];
  }
  out *= 1.0 / z;
  return out;
}

LossAndGrad softmax_cross_entropy(const Tensor& logits, std::size_t target_index) {
  if (logits.rows() != 1) {
    throw DimensionError("softmax_cross_entropy: logits must be a vector, got " +
                         logits.shape().str());
  }
  if (target_index >= logits.size()) {
    throw IndexError("softmax_cross_entropy: target " + std::to_string(target_index) +
                     " out of range for " + std::to_string(logits.size()) + " classes");
  }
  const double mx = *std::max_element(logits.data().begin(), logits.data().end());
  double z = 0.0;
  for (double v : logits.data()) z += std::exp(v - mx);
  const double log_z = std::log(z) + mx;

  LossAndGrad out;
  out.loss = log_z - logits[target_index];
  out.grad = Tensor(logits.shape());
  for (std::size_t i = 0; i < logits.size(); ++i) out.grad[i] = std::exp(logits[i] - log_z);
  out.grad[target_index] -= 1.0;
  return out;
}

LossAndGrad l2_token_loss(std::span<const double> prediction, std::span<const double> target) {
  if (prediction.size() != target.size()) {
    throw DimensionError("l2_token_loss: prediction length " + std::to_string(prediction.size()) +
                         " vs target length " + std::to_string(target.size()));
  }
  LossAndGrad out;
  out.grad = Tensor::vector(prediction.size());
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    const double d = prediction[i] - target[i];
    out.loss += d * d;
    out.grad[i] = 2.0 * d;
  }
  return out;
}

LossAndGrad l2_token_loss(const Tensor& prediction, const Tensor& target) {
  require_same_shape(prediction, target, "l2_token_loss");
  auto out = l2_token_loss(prediction.data(), target.data());
  out.grad.resize(prediction.rows(), prediction.cols());
  for (std::size_t i = 0; i < prediction.size(); ++i) out.grad[i] = 2.0 * (prediction[i] - target[i]);
  return out;
}

}  // namespace auxlstm
