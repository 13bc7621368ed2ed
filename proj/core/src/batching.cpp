#include "auxlstm/batching.hpp"

#include <algorithm>
#include <numeric>

#include "auxlstm/errors.hpp"

namespace auxlstm {

BatchIterator::BatchIterator(std::size_t dataset_size, std::size_t batch_size, RngStream rng)
    : order_(dataset_size), batch_size_(batch_size) {
  if (dataset_size == 0) throw ConfigError("batch_iter: dataset is empty");
  if (batch_size == 0) throw ConfigError("batch_iter: batch_size must be at least 1");
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  for (std::size_t i = order_.size() - 1; i > 0; --i) {
    std::swap(order_[i], order_[rng.uniform_int(0, i)]);
  }
}

std::size_t BatchIterator::num_batches() const {
  return (order_.size() + batch_size_ - 1) / batch_size_;
}

std::span<const std::size_t> BatchIterator::batch(std::size_t b) const {
  if (b >= num_batches()) throw IndexError("batch index " + std::to_string(b) + " out of range");
  const std::size_t begin = b * batch_size_;
  const std::size_t end = std::min(begin + batch_size_, order_.size());
  return std::span<const std::size_t>(order_).subspan(begin, end - begin);
}

bool BatchIterator::next(std::span<const std::size_t>& out) {
  if (cursor_ >= num_batches()) return false;
  out = batch(cursor_++);
  return true;
}

BatchIterator batch_iter(const Dataset& dataset, std::size_t batch_size, RngStream rng) {
  return BatchIterator(dataset.size(), batch_size, rng);
}

}  // namespace auxlstm
