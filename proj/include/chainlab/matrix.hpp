#ifndef CHAINLAB_MATRIX_HPP
#define CHAINLAB_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chainlab/errors.hpp"

namespace chainlab {

/// Dense row-major matrix of doubles. Small and value-semantic; immutable in
/// practice once a model owns it.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != m.cols_) {
        throw DimensionError("ragged rows: row " + std::to_string(r) + " has " +
                             std::to_string(rows[r].size()) + " columns, expected " +
                             std::to_string(m.cols_));
      }
      for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw IndexError("matrix index (" + std::to_string(r) + ", " + std::to_string(c) +
                       ") out of bounds for " + std::to_string(rows_) + "x" +
                       std::to_string(cols_));
    }
    return (*this)(r, c);
  }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_.data() + r * cols_, cols_);
  }
  std::span<double> row(std::size_t r) {
    return std::span<double>(data_.data() + r * cols_, cols_);
  }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
    return out;
  }

  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace chainlab

#endif  // CHAINLAB_MATRIX_HPP
