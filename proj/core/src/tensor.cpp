#include "auxlstm/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "auxlstm/errors.hpp"

namespace auxlstm {

std::string Shape::str() const {
  return "(" + std::to_string(rows) + "x" + std::to_string(cols) + ")";
}

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Tensor t(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw DimensionError("ragged initializer: row " + std::to_string(i) + " has " +
                           std::to_string(row.size()) + " entries, expected " + std::to_string(c));
    }
    std::copy(row.begin(), row.end(), t.row(i).begin());
    ++i;
  }
  return t;
}

Tensor Tensor::from_vector(std::span<const double> values) {
  Tensor t(1, values.size());
  std::copy(values.begin(), values.end(), t.data_.begin());
  return t;
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

void Tensor::resize(std::size_t rows, std::size_t cols) {
  rows_ = rows;
  cols_ = cols;
  data_.assign(rows * cols, 0.0);
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + a.shape().str() + " vs " +
                         b.shape().str());
  }
}

Tensor& Tensor::operator+=(const Tensor& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + a.shape().str() + " by " + b.shape().str());
  }
  Tensor out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

Tensor transpose(const Tensor& a) {
  Tensor out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(Tensor a, double s) { return a *= s; }

Tensor hadamard(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "hadamard");
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double sum(const Tensor& a) {
  double s = 0.0;
  for (double v : a.data()) s += v;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: length " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

void gemv_acc(const Tensor& w, std::span<const double> x, std::span<double> y) {
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  const double* wp = w.data().data();
  const double* xp = x.data();
  // Four rows per pass give independent accumulation chains; each row is
  // still summed left to right, so results match the plain loop bitwise.
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const double* r0 = wp + i * n;
    const double* r1 = r0 + n;
    const double* r2 = r1 + n;
    const double* r3 = r2 + n;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double xj = xp[j];
      a0 += r0[j] * xj;
      a1 += r1[j] * xj;
      a2 += r2[j] * xj;
      a3 += r3[j] * xj;
    }
    y[i] += a0;
    y[i + 1] += a1;
    y[i + 2] += a2;
    y[i + 3] += a3;
  }
  for (; i < m; ++i) {
    const double* wr = wp + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += wr[j] * xp[j];
    y[i] += acc;
  }
}

void gemv_t_acc(const Tensor& w, std::span<const double> y_grad, std::span<double> x_grad) {
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  const double* wp = w.data().data();
  double* xp = x_grad.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double g = y_grad[i];
    if (g == 0.0) continue;
    const double* wr = wp + i * n;
    for (std::size_t j = 0; j < n; ++j) xp[j] += g * wr[j];
  }
}

void outer_acc(Tensor& w_grad, std::span<const double> y_grad, std::span<const double> x) {
  const std::size_t m = w_grad.rows();
  const std::size_t n = w_grad.cols();
  double* wp = w_grad.data().data();
  const double* xp = x.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double g = y_grad[i];
    if (g == 0.0) continue;
    double* wr = wp + i * n;
    for (std::size_t j = 0; j < n; ++j) wr[j] += g * xp[j];
  }
}

void vecmat_acc(std::span<const double> x, const Tensor& w, std::span<double> y) {
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  const double* wp = w.data().data();
  double* yp = y.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* wr = wp + i * n;
    for (std::size_t j = 0; j < n; ++j) yp[j] += xi * wr[j];
  }
}

void vecmat_t_acc(const Tensor& w, std::span<const double> y_grad, std::span<double> x_grad) {
  gemv_acc(w, y_grad, x_grad);
}

void outer_t_acc(Tensor& w_grad, std::span<const double> x, std::span<const double> y_grad) {
  outer_acc(w_grad, x, y_grad);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double sigmoid(double x) {
  if (x >= 0.0) {
    const double z = std::exp(-x);
    return 1.0 / (1.0 + z);
  }
  const double z = std::exp(x);
  return z / (1.0 + z);
}

}  // namespace auxlstm
