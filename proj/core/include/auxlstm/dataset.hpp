#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "auxlstm/embedding.hpp"
#include "auxlstm/tensor.hpp"

namespace auxlstm {

/// One labelled sequence. Discrete sequences use `ids`; continuous ones use
/// `values`, a (length x token_dim) matrix with one token per row.
struct SequenceExample {
  TokenMode mode = TokenMode::kContinuous;
  std::vector<std::uint32_t> ids;
  Tensor values;
  std::uint32_t label = 0;

  std::size_t length() const { return mode == TokenMode::kDiscrete ? ids.size() : values.rows(); }
  std::span<const double> value(std::size_t t) const { return values.row(t); }

  friend bool operator==(const SequenceExample&, const SequenceExample&) = default;
};

struct Dataset {
  TokenMode mode = TokenMode::kContinuous;
  // Vocabulary size for discrete data, token dimensionality for continuous.
  std::size_t input_dim = 1;
  std::size_t num_classes = 0;
  std::vector<SequenceExample> examples;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }

  /// Throws FormatError if examples disagree on token mode or dimensionality,
  /// or if any example is empty.
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

void embed_token(const EmbeddingTable& embedding, const SequenceExample& example, std::size_t t,
                 std::span<double> out);
void accumulate_token_grad(const EmbeddingTable& embedding, const SequenceExample& example,
                           std::size_t t, std::span<const double> grad_out,
                           EmbeddingTable& grads);

/// Raw value of token t as a vector: the row of a continuous sequence, or a
/// one-element vector holding the id of a discrete one.
Tensor token_tensor(const SequenceExample& example, std::size_t t);

}  // namespace auxlstm
