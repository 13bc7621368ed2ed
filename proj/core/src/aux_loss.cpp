#include "auxlstm/aux_loss.hpp"

#include "auxlstm/errors.hpp"

namespace auxlstm {

double aggregate_aux_loss(std::span<const SegmentLoss> per_segment) {
  if (per_segment.empty()) throw ConfigError("aggregate_aux_loss: no segments");
  double loss = 0.0;
  std::size_t length = 0;
  for (const auto& s : per_segment) {
    if (s.length == 0) throw ConfigError("aggregate_aux_loss: segment of length 0");
    loss += s.loss;
    length += s.length;
  }
  return loss / static_cast<double>(length);
}

}  // namespace auxlstm
