#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "auxlstm/dataset.hpp"
#include "auxlstm/rng.hpp"

namespace auxlstm {

/// Example indices of one epoch, shuffled by `rng` and cut into batches of
/// `batch_size`; the final batch may be short. Throws ConfigError for an
/// empty dataset or a zero batch size.
class BatchIterator {
 public:
  BatchIterator(std::size_t dataset_size, std::size_t batch_size, RngStream rng);

  std::size_t num_batches() const;
  std::span<const std::size_t> batch(std::size_t b) const;
  std::span<const std::size_t> order() const { return order_; }

  /// Sequential access: false once every batch has been handed out.
  bool next(std::span<const std::size_t>& out);

 private:
  std::vector<std::size_t> order_;
  std::size_t batch_size_;
  std::size_t cursor_ = 0;
};

BatchIterator batch_iter(const Dataset& dataset, std::size_t batch_size, RngStream rng);

}  // namespace auxlstm
