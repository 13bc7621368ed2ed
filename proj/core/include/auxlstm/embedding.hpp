#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>

#include "auxlstm/rng.hpp"
#include "auxlstm/tensor.hpp"

namespace auxlstm {

enum class TokenMode : std::uint8_t { kDiscrete = 0, kContinuous = 1 };

/// Maps raw tokens to the LSTM input space. Discrete tokens select a row of
/// `table` (vocab x embed); continuous tokens are projected as x = v * table
/// with table (token_dim x embed).
struct EmbeddingTable {
  TokenMode mode = TokenMode::kDiscrete;
  Tensor table;

  std::size_t embed_dim() const { return table.cols(); }
  /// Vocabulary size (discrete) or token dimensionality (continuous).
  std::size_t input_dim() const { return table.rows(); }

  static EmbeddingTable uniform(TokenMode mode, std::size_t input_dim, std::size_t embed,
                                RngStream& rng, double scale = 0.08);
  EmbeddingTable zeros_like() const;

  void embed_id(std::uint32_t id, std::span<double> out) const;
  void embed_value(std::span<const double> value, std::span<double> out) const;

  /// Backward of embed_id / embed_value: accumulate the table gradient.
  void accumulate_id_grad(std::uint32_t id, std::span<const double> grad_out,
                          EmbeddingTable& grads) const;
  void accumulate_value_grad(std::span<const double> value, std::span<const double> grad_out,
                             EmbeddingTable& grads) const;
  /// Cotangent of the raw continuous token given the cotangent of its embedding.
  void value_input_grad(std::span<const double> grad_out, std::span<double> value_grad) const;
};

template <class P, class F>
  requires std::is_same_v<std::remove_const_t<P>, EmbeddingTable>
void visit_blocks(P& p, F&& f) {
  f("table", p.table);
}

}  // namespace auxlstm
