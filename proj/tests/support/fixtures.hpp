#pragma once

#include <cstddef>
#include <cstdint>

#include "auxlstm/classifier.hpp"
#include "auxlstm/config.hpp"
#include "auxlstm/dataset.hpp"
#include "auxlstm/losses.hpp"
#include "auxlstm/model.hpp"
#include "auxlstm/trainer.hpp"
#include "auxlstm/unroll.hpp"
#include "oracles.hpp"

namespace fixtures {

inline auxlstm::SequenceExample continuous_example(std::size_t T, std::size_t dim,
                                                   std::uint32_t label, auxlstm::RngStream& rng) {
  auxlstm::SequenceExample ex;
  ex.mode = auxlstm::TokenMode::kContinuous;
  ex.values = oracle::random_tensor(T, dim, rng, 0.0, 1.0);
  ex.label = label;
  return ex;
}

/// Token t has id t, so embedding row t collects exactly dLoss/dx_t.
inline auxlstm::SequenceExample unique_token_example(std::size_t T, std::uint32_t label) {
  auxlstm::SequenceExample ex;
  ex.mode = auxlstm::TokenMode::kDiscrete;
  for (std::size_t t = 0; t < T; ++t) ex.ids.push_back(static_cast<std::uint32_t>(t));
  ex.label = label;
  return ex;
}

inline auxlstm::ExperimentConfig tiny_config(auxlstm::TrainMode mode, std::size_t hidden,
                                             std::size_t embed, std::size_t ffn) {
  auxlstm::ExperimentConfig c;
  c.mode = mode;
  c.model.hidden = hidden;
  c.model.embed = embed;
  c.model.ffn = ffn;
  c.model.aux_ffn = ffn;
  c.data.kind = auxlstm::DatasetKind::kCopy;
  return c;
}

/// Overwrites every parameter (biases too) with uniform(-scale, scale), so
/// no unit sits exactly at a ReLU kink.
inline void randomize(auxlstm::Model& m, auxlstm::RngStream rng, double scale = 0.5) {
  auxlstm::visit_blocks(m, [&](const std::string&, auxlstm::Tensor& t) {
    for (double& v : t.data()) v = rng.uniform(-scale, scale);
  });
}

/// Cotangent of the supervised loss with respect to the raw continuous
/// tokens, assembled from the engine's pieces with a full window.
inline auxlstm::Tensor supervised_token_grads(const auxlstm::Model& model,
                                             const auxlstm::SequenceExample& ex,
                                             const auxlstm::ExampleRngs& rngs) {
  using namespace auxlstm;
  UnrollOptions uo;
  uo.window = ex.length();
  auto u = unroll_forward(model.lstm, model.embedding, ex, uo);
  RngStream mask = rngs.head_mask;
  auto head = classifier_forward(model.head, u.final_state.hidden.data(), mask, true);
  auto ce = softmax_cross_entropy(head.logits, ex.label);
  Model grads = model.zeros_like();
  StateGrad g{classifier_backward(model.head, head.cache, ce.grad.data(), grads.head),
              Tensor::vector(model.lstm.hidden())};
  auto br = bptt_backward(model.lstm, u.tape, g, grads.lstm);
  Tensor out(ex.length(), ex.values.cols());
  for (std::size_t t = 0; t < ex.length(); ++t) {
    model.embedding.value_input_grad(br.input_grads[t].data(), out.row(t));
  }
  return out;
}

}  // namespace fixtures
