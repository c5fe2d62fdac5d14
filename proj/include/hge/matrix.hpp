// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hge/errors.hpp"

namespace hge {

// Dense row-major matrix. Training runs in float; double is used for
// finite-difference gradient checking.
template <typename T>
class Mat {
public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  T operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  T* row(std::size_t r) { return data_.data() + r * cols_; }
  const T* row(std::size_t r) const { return data_.data() + r * cols_; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> flat() { return {data_.data(), data_.size()}; }
  std::span<const T> flat() const { return {data_.data(), data_.size()}; }

  bool same_shape(const Mat& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  void fill(T v) { data_.assign(data_.size(), v); }

  template <typename U>
  Mat<U> cast() const {
    Mat<U> out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = static_cast<U>(data_[i]);
    return out;
  }

  bool all_finite() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using MatF = Mat<float>;
using MatD = Mat<double>;

inline void require_shape(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("dimension mismatch: ") + what);
}

extern template class Mat<float>;
extern template class Mat<double>;

}  // namespace hge
