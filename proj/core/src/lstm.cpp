#include "auxlstm/lstm.hpp"

#include <algorithm>
#include <cmath>

#include "auxlstm/errors.hpp"

namespace auxlstm {

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden, double forget_bias_offset) {
  LstmParams p;
  p.input_weights = Tensor(4 * hidden, input_dim);
  p.recurrent_weights = Tensor(4 * hidden, hidden);
  p.bias = Tensor::vector(4 * hidden);
  p.forget_bias_offset = forget_bias_offset;
  return p;
}

LstmParams LstmParams::uniform(std::size_t input_dim, std::size_t hidden, RngStream& rng,
                               double scale, double forget_bias_offset) {
  LstmParams p = zeros(input_dim, hidden, forget_bias_offset);
  for (double& w : p.input_weights.data()) w = rng.uniform(-scale, scale);
  for (double& w : p.recurrent_weights.data()) w = rng.uniform(-scale, scale);
  return p;
}

LstmParams LstmParams::zeros_like() const {
  return zeros(input_dim(), hidden(), forget_bias_offset);
}

void LstmParams::validate() const {
  const std::size_t h = recurrent_weights.cols();
  if (recurrent_weights.rows() != 4 * h || input_weights.rows() != 4 * h ||
      bias.rows() != 1 || bias.cols() != 4 * h) {
    throw DimensionError("LstmParams: inconsistent gate blocks, input " +
                         input_weights.shape().str() + ", recurrent " +
                         recurrent_weights.shape().str() + ", bias " + bias.shape().str());
  }
}

bool StateGrad::is_zero() const {
  auto zero = [](const Tensor& t) {
    return std::all_of(t.data().begin(), t.data().end(), [](double v) { return v == 0.0; });
  };
  return zero(hidden) && zero(cell);
}

namespace {

void ensure_vector(Tensor& t, std::size_t n) {
  if (t.rows() != 1 || t.cols() != n) t.resize(1, n);
}

}  // namespace

void lstm_step_into(const LstmParams& params, const LstmState& state,
                    std::span<const double> input, StepCache& cache, LstmState& next) {
  const std::size_t h = params.hidden();
  if (input.size() != params.input_dim()) {
    throw DimensionError("lstm_step: input length " + std::to_string(input.size()) +
                         " but input weights are " + params.input_weights.shape().str());
  }
  if (state.hidden.size() != h || state.cell.size() != h) {
    throw DimensionError("lstm_step: state size " + std::to_string(state.hidden.size()) + "/" +
                         std::to_string(state.cell.size()) + " but hidden is " +
                         std::to_string(h));
  }
  ensure_vector(cache.input, input.size());
  std::copy(input.begin(), input.end(), cache.input.data().begin());
  cache.h_prev = state.hidden;
  cache.c_prev = state.cell;

  ensure_vector(cache.gates, 4 * h);
  auto z = cache.gates.data();
  std::copy(params.bias.data().begin(), params.bias.data().end(), z.begin());
  gemv_acc(params.input_weights, input, z);
  gemv_acc(params.recurrent_weights, state.hidden.data(), z);

  const double offset = params.forget_bias_offset;
  for (std::size_t k = 0; k < h; ++k) {
    z[k] = sigmoid(z[k]);
    z[h + k] = sigmoid(z[h + k] + offset);
    z[2 * h + k] = std::tanh(z[2 * h + k]);
    z[3 * h + k] = sigmoid(z[3 * h + k]);
  }

  ensure_vector(cache.cell, h);
  ensure_vector(cache.tanh_cell, h);
  ensure_vector(cache.hidden, h);
  for (std::size_t k = 0; k < h; ++k) {
    const double c = z[h + k] * state.cell[k] + z[k] * z[2 * h + k];
    cache.cell[k] = c;
    cache.tanh_cell[k] = std::tanh(c);
    cache.hidden[k] = z[3 * h + k] * cache.tanh_cell[k];
  }
  next.hidden = cache.hidden;
  next.cell = cache.cell;
}

std::pair<LstmState, StepCache> lstm_step(const LstmParams& params, const LstmState& state,
                                          const Tensor& input) {
  std::pair<LstmState, StepCache> out;
  lstm_step_into(params, state, input.data(), out.second, out.first);
  return out;
}

void lstm_step_backward(const LstmParams& params, const StepCache& cache,
                        const StateGrad& next_grad, LstmParams& grads,
                        std::span<double> input_grad, StateGrad& prev_grad) {
  const std::size_t h = params.hidden();
  if (next_grad.hidden.size() != h || next_grad.cell.size() != h) {
    throw DimensionError("lstm_step_backward: state gradient size does not match hidden " +
                         std::to_string(h));
  }
  thread_local Tensor dz;
  ensure_vector(dz, 4 * h);
  const auto g = cache.gates.data();

  ensure_vector(prev_grad.hidden, h);
  ensure_vector(prev_grad.cell, h);
  for (std::size_t k = 0; k < h; ++k) {
    const double i = g[k];
    const double f = g[h + k];
    const double cand = g[2 * h + k];
    const double o = g[3 * h + k];
    const double tc = cache.tanh_cell[k];
    const double dh = next_grad.hidden[k];
    const double dc = next_grad.cell[k] + dh * o * (1.0 - tc * tc);
    dz[k] = dc * cand * i * (1.0 - i);
    dz[h + k] = dc * cache.c_prev[k] * f * (1.0 - f);
    dz[2 * h + k] = dc * i * (1.0 - cand * cand);
    dz[3 * h + k] = dh * tc * o * (1.0 - o);
    prev_grad.cell[k] = dc * f;
  }

  outer_acc(grads.input_weights, dz.data(), cache.input.data());
  outer_acc(grads.recurrent_weights, dz.data(), cache.h_prev.data());
  axpy(1.0, dz.data(), grads.bias.data());
  if (!input_grad.empty()) gemv_t_acc(params.input_weights, dz.data(), input_grad);
  prev_grad.hidden.fill(0.0);
  gemv_t_acc(params.recurrent_weights, dz.data(), prev_grad.hidden.data());
}

}  // namespace auxlstm
