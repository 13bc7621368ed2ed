#include "auxlstm/model_gradcheck.hpp"

#include <algorithm>

#include "auxlstm/errors.hpp"
#include "auxlstm/gradcheck.hpp"

namespace auxlstm {

ModelGradcheck gradcheck_model(const Model& model, const SequenceExample& example,
                               const ExampleOptions& options, const ExampleRngs& rngs, double h) {
  ExampleOptions opt = options;
  opt.grad_scale = 1.0;
  Model grads = model.zeros_like();
  compute_example(model, example, opt, rngs, &grads);

  std::vector<const Tensor*> analytic;
  visit_blocks(grads, [&](const std::string&, const Tensor& t) { analytic.push_back(&t); });

  Model probe = model;
  std::vector<std::pair<std::string, Tensor*>> blocks;
  visit_blocks(probe, [&](const std::string& n, Tensor& t) { blocks.emplace_back(n, &t); });

  ModelGradcheck out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Tensor& target = *blocks[b].second;
    const Tensor original = target;
    auto f = [&](const Tensor& theta) {
      target = theta;
      return compute_example(probe, example, opt, rngs, nullptr).report.total;
    };
    const Tensor numeric = finite_difference_gradient(f, original, h);
    target = original;
    const auto cmp = compare_gradients(*analytic[b], numeric);
    out.blocks.push_back({blocks[b].first, cmp.count, cmp.max_relative_error, cmp.worst_index});
    out.max_relative_error = std::max(out.max_relative_error, cmp.max_relative_error);
  }
  return out;
}

}  // namespace auxlstm
