#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace auxlstm {

/// Summed token loss L_i of one segment and its length l_i.
struct SegmentLoss {
  double loss = 0.0;
  std::size_t length = 0;
};

struct LossReport {
  double supervised = 0.0;
  std::vector<SegmentLoss> per_segment;
  double auxiliary = 0.0;
  double total = 0.0;
  std::size_t predicted_tokens = 0;
};

/// Ratio of sums: sum(L_i) / sum(l_i). Not the mean of per-segment means.
/// Throws ConfigError on an empty list or a zero length.
double aggregate_aux_loss(std::span<const SegmentLoss> per_segment);

}  // namespace auxlstm
