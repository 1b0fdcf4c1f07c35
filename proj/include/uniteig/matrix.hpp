#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "uniteig/errors.hpp"

namespace uniteig {

using cplx = std::complex<double>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

inline double conj_if(double x) { return x; }
inline cplx conj_if(const cplx& z) { return std::conj(z); }

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Dense row-major matrix. Complex entries are std::complex<double>, i.e.
/// interleaved (re, im) pairs in a single allocation.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  /// Takes ownership of `entries` (row-major). Rejects wrong lengths and non-finite values.
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("matrix entries length " + std::to_string(data_.size()) +
                           " does not match shape " + shape_string(rows_, cols_));
    }
    for (const T& v : data_) {
      if (!is_finite(v)) throw InputError("matrix entries must be finite");
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix diagonal(std::span<const T> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  std::span<T> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  void set_col(std::size_t j, std::span<const T> values) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) {
      throw DimensionError("block " + shape_string(nr, nc) + " at (" + std::to_string(r0) + ", " +
                           std::to_string(c0) + ") exceeds " + shape_string(rows_, cols_));
    }
    Matrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& src) {
    if (r0 + src.rows() > rows_ || c0 + src.cols() > cols_) {
      throw DimensionError("cannot place " + shape_string(src.rows(), src.cols()) + " block into " +
                           shape_string(rows_, cols_));
    }
    for (std::size_t i = 0; i < src.rows(); ++i)
      for (std::size_t j = 0; j < src.cols(); ++j) (*this)(r0 + i, c0 + j) = src(i, j);
  }

  /// Gathers the listed columns, in order.
  Matrix columns(std::span<const std::size_t> indices) const {
    Matrix out(rows_, indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k)
      for (std::size_t i = 0; i < rows_; ++i) out(i, k) = (*this)(i, indices[k]);
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o, "+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o, "-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (T& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend bool operator==(const Matrix&, const Matrix&) = default;

  static std::string shape_string(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
  }

 private:
  void require_same_shape(const Matrix& o, const char* op) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) {
      throw DimensionError(std::string("operator") + op + ": shapes " + shape_string(rows_, cols_) +
                           " and " + shape_string(o.rows_, o.cols_) + " differ");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;

template <typename T>
double frobenius_norm(const Matrix<T>& a) {
  // scaled sum of squares, as in LAPACK's xLASSQ
  double scale = 0.0;
  double ssq = 1.0;
  auto accumulate = [&](double x) {
    const double ax = std::abs(x);
    if (ax == 0.0) return;
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  };
  for (const T& v : a.data()) {
    if constexpr (is_complex_v<T>) {
      accumulate(v.real());
      accumulate(v.imag());
    } else {
      accumulate(v);
    }
  }
  return scale * std::sqrt(ssq);
}

template <typename T>
double max_abs(const Matrix<T>& a) {
  double m = 0.0;
  for (const T& v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

inline ComplexMatrix to_complex(const RealMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = a.data()[k];
  return out;
}

inline RealMatrix real_part(const ComplexMatrix& a) {
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = a.data()[k].real();
  return out;
}

inline RealMatrix imag_part(const ComplexMatrix& a) {
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = a.data()[k].imag();
  return out;
}

/// Horizontal concatenation [a b].
template <typename T>
Matrix<T> hconcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) {
    throw DimensionError("hconcat: row counts " + std::to_string(a.rows()) + " and " +
                         std::to_string(b.rows()) + " differ");
  }
  Matrix<T> out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

}  // namespace uniteig
