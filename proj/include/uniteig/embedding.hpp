#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uniteig/matrix.hpp"

namespace uniteig {

/// Block tolerance accepted when a real matrix is read back from text.
inline constexpr double kIngestStructureTolerance = 1e-13;

/// The real 2n x 2n matrix M = [[A, -B], [B, A]] of a complex n x n matrix
/// U = A + iB. It acts on stacked (real; imaginary) vectors.
class RealEmbedding {
 public:
  /// Validates the block structure of `m` and symmetrizes it by averaging
  /// the two copies of A and of B. Throws StructureError naming the largest
  /// block discrepancy when it exceeds `tolerance`.
  static RealEmbedding from_matrix(const RealMatrix& m,
                                   double tolerance = kIngestStructureTolerance);

  std::size_t n() const noexcept { return n_; }
  const RealMatrix& matrix() const noexcept { return matrix_; }

  /// Largest absolute deviation from the [[A,-B],[B,A]] pattern.
  static double block_discrepancy(const RealMatrix& m);

 private:
  RealEmbedding(std::size_t n, RealMatrix m) : n_(n), matrix_(std::move(m)) {}
  friend RealEmbedding embed(const ComplexMatrix& u);

  std::size_t n_ = 0;
  RealMatrix matrix_;
};

/// Builds M from U. The embedding is defined for any square complex matrix;
/// a warning goes to the log sink when U is visibly non-unitary.
RealEmbedding embed(const ComplexMatrix& u);

/// Inverse of embed: U = A + iB from the left block column.
ComplexMatrix extract(const RealEmbedding& m);
ComplexMatrix extract(const RealMatrix& m, double tolerance = kIngestStructureTolerance);

/// U = L M L^H / 2 with L = [I  iI]; valid for complex M as well, e.g. one
/// rebuilt from an eigendecomposition.
ComplexMatrix compress(const ComplexMatrix& m);

/// The analytically known eigenbasis of M for U = V diag(lambda) V^H:
/// W = [W+ W-], W+ = [V; -iV]/sqrt(2), W- = [-i conj(V); conj(V)]/sqrt(2),
/// with eigenvalues sigma = (lambda, conj(lambda)).
struct KnownEigenbasis {
  ComplexMatrix w;
  std::vector<cplx> sigma;
};

KnownEigenbasis build_w(const ComplexMatrix& v, std::span<const cplx> lambda);

/// Called when embed sees ||U^H U - I||_F above 1e-8 n. Defaults to stderr.
using WarningSink = void (*)(const char* message);
void set_warning_sink(WarningSink sink);
void emit_warning(const char* message);

}  // namespace uniteig
