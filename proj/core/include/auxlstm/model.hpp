#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "auxlstm/aux_decoder.hpp"
#include "auxlstm/classifier.hpp"
#include "auxlstm/config.hpp"
#include "auxlstm/dataset.hpp"
#include "auxlstm/embedding.hpp"
#include "auxlstm/lstm.hpp"
#include "auxlstm/rmsprop.hpp"

namespace auxlstm {

/// Embedding, main LSTM, classifier head and (for the r and p modes) the
/// auxiliary decoder.
struct Model {
  TrainMode mode = TrainMode::kBaseline;
  EmbeddingTable embedding;
  LstmParams lstm;
  FfnParams head;
  std::optional<AuxDecoderParams> decoder;

  /// Initialization is a pure function of (config, data geometry, seed).
  static Model create(const ExperimentConfig& config, TokenMode token_mode, std::size_t input_dim,
                      std::size_t num_classes);
  Model zeros_like() const;

  friend bool operator==(const Model& a, const Model& b);
};

template <class M, class F>
  requires std::is_same_v<std::remove_const_t<M>, Model>
void visit_blocks(M& m, F&& f) {
  auto prefixed = [&](std::string_view prefix) {
    return [&f, prefix](std::string_view n, auto& t) { f(std::string(prefix) + std::string(n), t); };
  };
  visit_blocks(m.embedding, prefixed("embedding."));
  visit_blocks(m.lstm, prefixed("lstm."));
  visit_blocks(m.head, prefixed("head."));
  if (m.decoder) visit_blocks(*m.decoder, prefixed("decoder."));
}

/// Pairs every parameter block of `model` with its gradient in `grads`.
std::vector<ParamBlock> param_blocks(Model& model, const Model& grads);

std::size_t parameter_count(const Model& model);
double grad_squared_norm(const Model& grads);

}  // namespace auxlstm
