#include "auxlstm/dataset.hpp"

#include "auxlstm/errors.hpp"

namespace auxlstm {

void Dataset::validate() const {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (ex.mode != mode) {
      throw FormatError("dataset: example " + std::to_string(i) + " has a different token mode");
    }
    if (ex.length() == 0) throw FormatError("dataset: example " + std::to_string(i) + " is empty");
    if (mode == TokenMode::kContinuous && ex.values.cols() != input_dim) {
      throw FormatError("dataset: example " + std::to_string(i) + " has token dim " +
                        std::to_string(ex.values.cols()) + ", expected " +
                        std::to_string(input_dim));
    }
    if (mode == TokenMode::kDiscrete) {
      for (auto id : ex.ids) {
        if (id >= input_dim) {
          throw FormatError("dataset: example " + std::to_string(i) + " has token id " +
                            std::to_string(id) + " outside vocabulary " +
                            std::to_string(input_dim));
        }
      }
    }
    if (num_classes != 0 && ex.label >= num_classes) {
      throw FormatError("dataset: example " + std::to_string(i) + " has label " +
                        std::to_string(ex.label) + " >= " + std::to_string(num_classes));
    }
  }
}

void embed_token(const EmbeddingTable& embedding, const SequenceExample& example, std::size_t t,
                 std::span<double> out) {
  if (example.mode == TokenMode::kDiscrete) {
    embedding.embed_id(example.ids[t], out);
  } else {
    embedding.embed_value(example.value(t), out);
  }
}

void accumulate_token_grad(const EmbeddingTable& embedding, const SequenceExample& example,
                           std::size_t t, std::span<const double> grad_out,
                           EmbeddingTable& grads) {
  if (example.mode == TokenMode::kDiscrete) {
    embedding.accumulate_id_grad(example.ids[t], grad_out, grads);
  } else {
    embedding.accumulate_value_grad(example.value(t), grad_out, grads);
  }
}

Tensor token_tensor(const SequenceExample& example, std::size_t t) {
  if (example.mode == TokenMode::kDiscrete) {
    return Tensor::vector(1, static_cast<double>(example.ids[t]));
  }
  return Tensor::from_vector(example.value(t));
}

}  // namespace auxlstm
