#include "auxlstm/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "auxlstm/errors.hpp"

namespace auxlstm {

Tensor finite_difference_gradient(const ScalarFunction& f, const Tensor& theta, double h) {
  if (!(h > 0.0)) throw NumericError("finite_difference_gradient: step must be positive");
  Tensor probe = theta;
  Tensor grad(theta.shape());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double original = probe[i];
    probe[i] = original + h;
    const double up = f(probe);
    probe[i] = original - h;
    const double down = f(probe);
    probe[i] = original;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("finite_difference_gradient: non-finite evaluation at coordinate " +
                         std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradientComparison compare_gradients(const Tensor& analytic, const Tensor& numeric,
                                     double floor) {
  require_same_shape(analytic, numeric, "compare_gradients");
  GradientComparison out;
  out.count = analytic.size();
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double e = relative_error(analytic[i], numeric[i], floor);
    if (e > out.max_relative_error) {
      out.max_relative_error = e;
      out.worst_index = i;
    }
  }
  return out;
}

}  // namespace auxlstm
