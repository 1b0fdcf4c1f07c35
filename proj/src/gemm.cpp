#include <cstddef>
#include <string>

#include "uniteig/matcore.hpp"

namespace uniteig {

namespace {

// Below this many multiply-adds the thread fork costs more than it saves.
constexpr std::size_t kParallelGemmWork = std::size_t{1} << 15;

template <typename T>
void require_conformable(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("gemm: cannot multiply " + Matrix<T>::shape_string(a.rows(), a.cols()) +
                         " by " + Matrix<T>::shape_string(b.rows(), b.cols()));
  }
}

// c += a * b over one row. The complex case is spelled out in real
// arithmetic: std::complex multiplication carries an inf/nan recovery branch
// that stops the loop from vectorizing, and matrices here are always finite.
inline void axpy_row(double a, const double* __restrict b, double* __restrict c, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) c[j] += a * b[j];
}

inline void axpy_row(cplx a, const cplx* b, cplx* c, std::size_t n) {
  const double ar = a.real();
  const double ai = a.imag();
  const double* __restrict bd = reinterpret_cast<const double*>(b);
  double* __restrict cd = reinterpret_cast<double*>(c);
  for (std::size_t j = 0; j < n; ++j) {
    const double br = bd[2 * j];
    const double bi = bd[2 * j + 1];
    cd[2 * j] += ar * br - ai * bi;
    cd[2 * j + 1] += ar * bi + ai * br;
  }
}

}  // namespace

template <typename T>
Matrix<T> gemm(const Matrix<T>& a, const Matrix<T>& b) {
  require_conformable(a, b);
  Matrix<T> c(a.rows(), b.cols());
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
  const std::size_t inner = a.cols();
  const std::size_t cols = b.cols();
  const bool parallel = a.rows() * inner * cols >= kParallelGemmWork;

#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    T* crow = c.row(static_cast<std::size_t>(i)).data();
    const T* arow = a.row(static_cast<std::size_t>(i)).data();
    for (std::size_t k = 0; k < inner; ++k) axpy_row(arow[k], b.row(k).data(), crow, cols);
  }
  return c;
}

template <typename T>
Matrix<T> adjoint(const Matrix<T>& a) {
  Matrix<T> out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = conj_if(a(i, j));
  return out;
}

namespace reference {

template <typename T>
Matrix<T> gemm(const Matrix<T>& a, const Matrix<T>& b) {
  require_conformable(a, b);
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T sum{};
      for (std::size_t k = 0; k < a.cols(); ++k) sum += a(i, k) * b(k, j);
      c(i, j) = sum;
    }
  }
  return c;
}

template RealMatrix gemm(const RealMatrix&, const RealMatrix&);
template ComplexMatrix gemm(const ComplexMatrix&, const ComplexMatrix&);

}  // namespace reference

template RealMatrix gemm(const RealMatrix&, const RealMatrix&);
template ComplexMatrix gemm(const ComplexMatrix&, const ComplexMatrix&);
template RealMatrix adjoint(const RealMatrix&);
template ComplexMatrix adjoint(const ComplexMatrix&);

}  // namespace uniteig
