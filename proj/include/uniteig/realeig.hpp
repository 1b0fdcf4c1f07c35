#pragma once

#include <cstddef>
#include <vector>

#include "uniteig/embedding.hpp"
#include "uniteig/matrix.hpp"

namespace uniteig {

/// Complete eigendecomposition M Z = Z diag(sigma). Columns of Z need not be
/// orthonormal; any solver output with an invertible Z qualifies.
struct EigenDecomposition {
  ComplexMatrix z;
  std::vector<cplx> sigma;

  std::size_t dim() const noexcept { return sigma.size(); }
};

/// Gap below which cos(theta) values of the symmetric part are treated as one cluster.
inline constexpr double kCosineClusterTolerance = 1e-10;

/// Neighbouring cos(theta) values closer than this are also kept together
/// when their sines are further apart than their cosines. Near +-1 a phase
/// gap d moves the cosine only by about d^2/2, so splitting there would cost
/// eigenvector accuracy that the skew part recovers at first order.
inline constexpr double kCosineMergeWindow = 1e-3;

/// Eigendecomposition of an orthogonal embedding using only real arithmetic
/// up to the final pairing into complex vectors.
///
/// The symmetric part C = (M + M^T)/2 is diagonalized by Jacobi rotations.
/// On each cluster of C (eigenvalues near cos(theta)) the skew part
/// K = (M - M^T)/2 acts as sin(theta) times a complex structure: an SVD of
/// the restricted K splits the cluster into its sin(theta) = 0 part (real
/// eigenvalues +1 or -1) and orthonormal pairs (x, w = Kx / sin(theta)),
/// which give the eigenvectors x -+ i w for exp(+-i theta).
///
/// Eigenvalues are ordered by |phase| then phase, so conjugates sit next to
/// each other: 1, ..., e^{-i t}, e^{i t}, ..., -1.
EigenDecomposition real_normal_eig(const RealEmbedding& m);

/// ||M Z - Z diag(sigma)||_F / max(1, ||M||_F).
double eig_residual(const RealEmbedding& m, const EigenDecomposition& e);
double eig_residual(const RealMatrix& m, const EigenDecomposition& e);

}  // namespace uniteig
