#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's kernels.

#include <cmath>
#include <cstddef>
#include <vector>

#include "auxlstm/lstm.hpp"
#include "auxlstm/rng.hpp"
#include "auxlstm/tensor.hpp"

namespace oracle {

inline auxlstm::Tensor random_tensor(std::size_t rows, std::size_t cols, auxlstm::RngStream& rng,
                                     double lo = -1.0, double hi = 1.0) {
  auxlstm::Tensor t(rows, cols);
  for (double& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

inline std::vector<std::vector<double>> triple_loop(const std::vector<std::vector<double>>& a,
                                                    const std::vector<std::vector<double>>& b) {
  std::vector<std::vector<double>> c(a.size(), std::vector<double>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b[0].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline std::vector<std::vector<double>> nested(const auxlstm::Tensor& t) {
  std::vector<std::vector<double>> out(t.rows(), std::vector<double>(t.cols()));
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) out[r][c] = t(r, c);
  return out;
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct PlainState {
  std::vector<double> h, c;
};

// Straight-line LSTM update written from the equations, gate by gate.
inline PlainState lstm_step(const auxlstm::LstmParams& p, const PlainState& s,
                            const std::vector<double>& x) {
  const std::size_t H = p.hidden(), E = p.input_dim();
  auto pre = [&](std::size_t gate, std::size_t j) {
    const std::size_t row = gate * H + j;
    double z = p.bias[row];
    for (std::size_t k = 0; k < E; ++k) z += p.input_weights(row, k) * x[k];
    for (std::size_t k = 0; k < H; ++k) z += p.recurrent_weights(row, k) * s.h[k];
    return z;
  };
  PlainState out{std::vector<double>(H), std::vector<double>(H)};
  for (std::size_t j = 0; j < H; ++j) {
    const double i = logistic(pre(0, j));
    const double f = logistic(pre(1, j) + p.forget_bias_offset);
    const double g = std::tanh(pre(2, j));
    const double o = logistic(pre(3, j));
    out.c[j] = f * s.c[j] + i * g;
    out.h[j] = o * std::tanh(out.c[j]);
  }
  return out;
}

}  // namespace oracle
