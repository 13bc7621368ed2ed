#include "auxlstm/classifier.hpp"

#include "auxlstm/errors.hpp"

namespace auxlstm {

FfnParams FfnParams::uniform(std::size_t in, std::size_t hidden, std::size_t out, RngStream& rng,
                             double drop_connect_prob, double scale) {
  FfnParams p;
  p.w1 = Tensor(in, hidden);
  p.b1 = Tensor::vector(hidden);
  p.w2 = Tensor(hidden, out);
  p.b2 = Tensor::vector(out);
  p.drop_connect_prob = drop_connect_prob;
  for (double& w : p.w1.data()) w = rng.uniform(-scale, scale);
  for (double& w : p.w2.data()) w = rng.uniform(-scale, scale);
  return p;
}

FfnParams FfnParams::zeros_like() const {
  FfnParams p;
  p.w1 = Tensor(w1.shape());
  p.b1 = Tensor(b1.shape());
  p.w2 = Tensor(w2.shape());
  p.b2 = Tensor(b2.shape());
  p.drop_connect_prob = drop_connect_prob;
  return p;
}

FfnOutput classifier_forward(const FfnParams& ffn, std::span<const double> input, RngStream& rng,
                             bool train_mode) {
  if (input.size() != ffn.input_dim()) {
    throw DimensionError("classifier_forward: input length " + std::to_string(input.size()) +
                         " but first layer is " + ffn.w1.shape().str());
  }
  if (ffn.w2.rows() != ffn.hidden_dim() || ffn.b1.size() != ffn.hidden_dim() ||
      ffn.b2.size() != ffn.output_dim()) {
    throw DimensionError("classifier_forward: inconsistent layers " + ffn.w1.shape().str() +
                         " and " + ffn.w2.shape().str());
  }
  FfnOutput out;
  FfnCache& c = out.cache;
  c.train_mode = train_mode;
  c.input = Tensor::from_vector(input);
  c.hidden_pre = ffn.b1;
  vecmat_acc(input, ffn.w1, c.hidden_pre.data());
  c.hidden_act = c.hidden_pre;
  for (double& v : c.hidden_act.data()) v = v > 0.0 ? v : 0.0;

  const double p = ffn.drop_connect_prob;
  if (p == 0.0) {
    c.w2_effective = ffn.w2;
  } else if (train_mode) {
    c.mask = Tensor(ffn.w2.shape());
    c.w2_effective = ffn.w2;
    for (std::size_t i = 0; i < c.mask.size(); ++i) {
      const bool keep = !rng.bernoulli(p);
      c.mask[i] = keep ? 1.0 : 0.0;
      if (!keep) c.w2_effective[i] = 0.0;
    }
  } else {
    c.w2_effective = ffn.w2 * (1.0 - p);
  }

  out.logits = ffn.b2;
  vecmat_acc(c.hidden_act.data(), c.w2_effective, out.logits.data());
  return out;
}

Tensor classifier_backward(const FfnParams& ffn, const FfnCache& cache,
                           std::span<const double> logits_grad, FfnParams& grads) {
  if (logits_grad.size() != ffn.output_dim()) {
    throw DimensionError("classifier_backward: logits gradient length " +
                         std::to_string(logits_grad.size()) + " vs " +
                         std::to_string(ffn.output_dim()) + " outputs");
  }
  axpy(1.0, logits_grad, grads.b2.data());

  // dL/dW2 = scale (.) (h g^T), scale being the mask or the keep probability.
  const double p = ffn.drop_connect_prob;
  if (p == 0.0) {
    outer_t_acc(grads.w2, cache.hidden_act.data(), logits_grad);
  } else {
    Tensor local(ffn.w2.shape());
    outer_t_acc(local, cache.hidden_act.data(), logits_grad);
    if (cache.train_mode) {
      for (std::size_t i = 0; i < local.size(); ++i) grads.w2[i] += local[i] * cache.mask[i];
    } else {
      axpy(1.0 - p, local.data(), grads.w2.data());
    }
  }

  Tensor hidden_grad = Tensor::vector(ffn.hidden_dim());
  vecmat_t_acc(cache.w2_effective, logits_grad, hidden_grad.data());
  for (std::size_t i = 0; i < hidden_grad.size(); ++i) {
    if (cache.hidden_pre[i] <= 0.0) hidden_grad[i] = 0.0;
  }
  axpy(1.0, hidden_grad.data(), grads.b1.data());
  outer_t_acc(grads.w1, cache.input.data(), hidden_grad.data());

  Tensor input_grad = Tensor::vector(ffn.input_dim());
  vecmat_t_acc(ffn.w1, hidden_grad.data(), input_grad.data());
  return input_grad;
}

}  // namespace auxlstm
