#pragma once

#include <string>
#include <vector>

#include "auxlstm/trainer.hpp"

namespace auxlstm {

struct BlockCheck {
  std::string name;
  std::size_t count = 0;
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
};

struct ModelGradcheck {
  std::vector<BlockCheck> blocks;
  double max_relative_error = 0.0;
};

/// Compares the analytic gradient of compute_example's total loss with
/// central differences (step h) for every parameter of `model`. Meant for
/// small models: it costs two forward passes per parameter. Use ss_prob = 1
/// in `options`; fed-back predictions are treated as constants by the
/// analytic gradient.
ModelGradcheck gradcheck_model(const Model& model, const SequenceExample& example,
                               const ExampleOptions& options, const ExampleRngs& rngs,
                               double h = 1e-5);

}  // namespace auxlstm
