#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version (namespace
// kernels) and a plain serial reference (namespace kernels::serial) with the
// same signature. Every output element is produced by exactly one thread in a
// fixed summation order, so both versions return bit-identical results.

#include <span>
#include <vector>

#include "sigmoment/moments.hpp"

namespace sigmoment {

// Dense row-major matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T()) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const T> row(std::size_t i) const {
    return std::span<const T>(data_).subspan(i * cols_, cols_);
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace kernels {

// V[i, k] = points[i]^basis[k]
template <typename T>
Matrix<T> evaluation_matrix(const std::vector<Point<T>>& points,
                            const std::vector<MultiIndex>& basis);

// out[k] = sum_i weights[i] * points[i]^basis[k], summed in atom order.
template <typename T>
std::vector<T> weighted_moments(const std::vector<Point<T>>& points,
                                const std::vector<T>& weights,
                                const std::vector<MultiIndex>& basis);

// out[i] = |p(points[i])| / (1 + |points[i]|^2)^n
std::vector<double> growth_ratios(const Polynomial<double>& p, unsigned n,
                                  const std::vector<Point<double>>& points);

namespace serial {

template <typename T>
Matrix<T> evaluation_matrix(const std::vector<Point<T>>& points,
                            const std::vector<MultiIndex>& basis);

template <typename T>
std::vector<T> weighted_moments(const std::vector<Point<T>>& points,
                                const std::vector<T>& weights,
                                const std::vector<MultiIndex>& basis);

std::vector<double> growth_ratios(const Polynomial<double>& p, unsigned n,
                                  const std::vector<Point<double>>& points);

}  // namespace serial

// Number of OpenMP threads the kernels will use (1 when built without OpenMP).
int max_threads();

}  // namespace kernels
}  // namespace sigmoment
