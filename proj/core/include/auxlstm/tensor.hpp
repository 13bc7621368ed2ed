#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace auxlstm {

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  friend bool operator==(const Shape&, const Shape&) = default;
  std::string str() const;
};

/// Dense row-major matrix of doubles. Vectors are stored as 1 x n.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);
  explicit Tensor(Shape shape, double fill = 0.0) : Tensor(shape.rows, shape.cols, fill) {}

  static Tensor vector(std::size_t n, double fill = 0.0) { return Tensor(1, n, fill); }
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor from_vector(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  Shape shape() const { return {rows_, cols_}; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void fill(double value);
  void resize(std::size_t rows, std::size_t cols);

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double scale);

  bool all_finite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(Tensor a, double s);
Tensor hadamard(const Tensor& a, const Tensor& b);

double sum(const Tensor& a);
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
std::size_t argmax(std::span<const double> values);

// Kernels for the recurrent engine. Matrices are row-major; `y`, `x` spans
// must match the matrix dimensions.

/// y += W x, with W (m x n), x length n, y length m.
void gemv_acc(const Tensor& w, std::span<const double> x, std::span<double> y);
/// x_grad += W^T y_grad.
void gemv_t_acc(const Tensor& w, std::span<const double> y_grad, std::span<double> x_grad);
/// W_grad += y_grad x^T.
void outer_acc(Tensor& w_grad, std::span<const double> y_grad, std::span<const double> x);
/// y += x W, with x length m (treated as a row vector), W (m x n), y length n.
void vecmat_acc(std::span<const double> x, const Tensor& w, std::span<double> y);
/// x_grad += W y_grad.
void vecmat_t_acc(const Tensor& w, std::span<const double> y_grad, std::span<double> x_grad);
/// W_grad += x y_grad^T.
void outer_t_acc(Tensor& w_grad, std::span<const double> x, std::span<const double> y_grad);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

double sigmoid(double x);

void require_same_shape(const Tensor& a, const Tensor& b, const char* what);

}  // namespace auxlstm
