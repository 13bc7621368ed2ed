#pragma once

#include <functional>

#include "auxlstm/tensor.hpp"

namespace auxlstm {

using ScalarFunction = std::function<double(const Tensor&)>;

/// Central differences (f(theta + h e_i) - f(theta - h e_i)) / 2h for every
/// coordinate of theta. Throws NumericError if f is non-finite at a probe.
Tensor finite_difference_gradient(const ScalarFunction& f, const Tensor& theta, double h);

/// |a - b| / max(|a|, |b|, floor). The floor keeps entries that are zero up
/// to roundoff from reporting spurious relative error.
double relative_error(double analytic, double numeric, double floor = 1e-6);

struct GradientComparison {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  std::size_t count = 0;
};

GradientComparison compare_gradients(const Tensor& analytic, const Tensor& numeric,
                                     double floor = 1e-6);

}  // namespace auxlstm
