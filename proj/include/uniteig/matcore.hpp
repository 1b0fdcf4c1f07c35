#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "uniteig/matrix.hpp"

namespace uniteig {

/// Matrix product. Rows of the result are distributed over OpenMP threads
/// once the problem is large enough to pay for the fork.
template <typename T>
Matrix<T> gemm(const Matrix<T>& a, const Matrix<T>& b);

/// Conjugate transpose (plain transpose for real matrices).
template <typename T>
Matrix<T> adjoint(const Matrix<T>& a);

/// ||A^H A - I||_F for a square A.
double unitarity_residual(const ComplexMatrix& a);
double orthogonality_residual(const RealMatrix& a);

/// A = Q R with Q (rows x cols) having orthonormal columns and R upper
/// triangular with a real nonnegative diagonal.
template <typename T>
struct QrFactors {
  Matrix<T> q;
  Matrix<T> r;
};

template <typename T>
QrFactors<T> householder_qr(const Matrix<T>& a);

/// A = left * diag(values) * right^H, values nonincreasing. For an m x n
/// input, left is m x k and right is n x k with k = min(m, n).
template <typename T>
struct SingularSpectrum {
  std::vector<double> values;
  Matrix<T> left;
  Matrix<T> right;
};

inline constexpr std::size_t kMaxJacobiSweeps = 80;

/// One-sided Jacobi SVD. Column pairs are swept in round-robin order so
/// that each step rotates disjoint pairs, which run in parallel.
template <typename T>
SingularSpectrum<T> svd(const Matrix<T>& a);

/// Orthonormal basis of the numerical range of X.
struct RangeBasis {
  ComplexMatrix q;             ///< rows(X) x rank
  std::size_t rank = 0;
  double tau = 0.0;            ///< threshold actually applied
  std::vector<double> values;  ///< all singular values of X
};

/// Relative factor of the automatic rank threshold tau = max(rows, cols) * sigma_max * factor.
inline constexpr double kAutoRankFactor = 1e-12;

RangeBasis range_basis(const ComplexMatrix& x, std::optional<double> tol = std::nullopt);

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues ascending, eigenvectors in the matching columns.
struct SymmetricEigen {
  std::vector<double> values;
  RealMatrix vectors;
};

SymmetricEigen symmetric_eig(const RealMatrix& a);

/// Principal angles between range(A) and range(B), ascending. Both inputs
/// must have full column rank. Computed from sines, so small angles are
/// accurate to roughly machine precision.
std::vector<double> principal_angles(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest principal angle; pi/2 when the subspace dimensions differ.
double largest_principal_angle(const ComplexMatrix& a, const ComplexMatrix& b);

/// Serial kernels kept as references for the parallel ones above.
namespace reference {

template <typename T>
Matrix<T> gemm(const Matrix<T>& a, const Matrix<T>& b);

/// Cyclic-by-row one-sided Jacobi SVD.
template <typename T>
SingularSpectrum<T> svd(const Matrix<T>& a);

}  // namespace reference

}  // namespace uniteig
