#include "auxlstm/embedding.hpp"

#include <algorithm>

#include "auxlstm/errors.hpp"

namespace auxlstm {

EmbeddingTable EmbeddingTable::uniform(TokenMode mode, std::size_t input_dim, std::size_t embed,
                                       RngStream& rng, double scale) {
  EmbeddingTable e;
  e.mode = mode;
  e.table = Tensor(input_dim, embed);
  for (double& w : e.table.data()) w = rng.uniform(-scale, scale);
  return e;
}

EmbeddingTable EmbeddingTable::zeros_like() const {
  EmbeddingTable e;
  e.mode = mode;
  e.table = Tensor(table.shape());
  return e;
}

void EmbeddingTable::embed_id(std::uint32_t id, std::span<double> out) const {
  if (mode != TokenMode::kDiscrete) throw ConfigError("embed_id on a continuous embedding");
  if (id >= table.rows()) {
    throw IndexError("embedding: token id " + std::to_string(id) + " outside vocabulary of " +
                     std::to_string(table.rows()));
  }
  auto row = table.row(id);
  std::copy(row.begin(), row.end(), out.begin());
}

void EmbeddingTable::embed_value(std::span<const double> value, std::span<double> out) const {
  if (mode != TokenMode::kContinuous) throw ConfigError("embed_value on a discrete embedding");
  if (value.size() != table.rows()) {
    throw DimensionError("embedding: token of length " + std::to_string(value.size()) +
                         " against projection " + table.shape().str());
  }
  std::fill(out.begin(), out.end(), 0.0);
  vecmat_acc(value, table, out);
}

void EmbeddingTable::accumulate_id_grad(std::uint32_t id, std::span<const double> grad_out,
                                        EmbeddingTable& grads) const {
  axpy(1.0, grad_out, grads.table.row(id));
}

void EmbeddingTable::accumulate_value_grad(std::span<const double> value,
                                           std::span<const double> grad_out,
                                           EmbeddingTable& grads) const {
  outer_t_acc(grads.table, value, grad_out);
}

void EmbeddingTable::value_input_grad(std::span<const double> grad_out,
                                      std::span<double> value_grad) const {
  vecmat_t_acc(table, grad_out, value_grad);
}

}  // namespace auxlstm
