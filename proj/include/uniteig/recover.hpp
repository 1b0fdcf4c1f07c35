#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "uniteig/errors.hpp"
#include "uniteig/matrix.hpp"
#include "uniteig/realeig.hpp"

namespace uniteig {

inline constexpr double kDefaultDeltaGroup = 1e-8;

/// Eigenvalues of M must satisfy ||sigma| - 1| <= this to be grouped.
inline constexpr double kModulusGate = 0.1;

/// One numerically unique eigenvalue mu of M and its eigenvector block Z_mu.
struct EigenGroup {
  cplx mu;                           ///< unit modulus, at the circular mean phase of raw_mus
  std::vector<cplx> raw_mus;         ///< eigenvalues merged into this group, as supplied
  std::vector<std::size_t> indices;  ///< columns of Z that make up the block
  ComplexMatrix columns;             ///< 2n x m_M

  std::size_t multiplicity() const noexcept { return indices.size(); }
};

/// Single-linkage clustering of the eigenvalue phases: two eigenvalues share
/// a group iff a chain of phase gaps <= delta_group connects them, with
/// wraparound at +-pi. Groups come back sorted by principal phase.
std::vector<EigenGroup> group_eigenvalues(const EigenDecomposition& e, double delta_group);

/// X = L Z with L = [I  iI]: the top half plus i times the bottom half.
ComplexMatrix project_l(const ComplexMatrix& z);

struct RecoverOptions {
  double delta_group = kDefaultDeltaGroup;
  /// Absolute rank threshold. Unset selects max(n, m_M) * ||Z_mu||_2 * 1e-12 per group.
  std::optional<double> tau_rank;
  /// Process groups concurrently.
  bool parallel = true;
};

struct GroupRecord {
  cplx mu;             ///< snapped to the unit circle
  cplx raw_mean;       ///< arithmetic mean of the raw eigenvalues
  std::size_t m_m = 0;
  std::size_t rank = 0;  ///< m_U(mu)
  std::size_t m_ubar = 0;
  double tau = 0.0;
  std::vector<double> singular_values;  ///< of X_mu
  ComplexMatrix basis;                  ///< Q_mu, n x rank
};

struct RecoveryReport {
  ComplexMatrix v;
  std::vector<cplx> lambda;
  std::vector<GroupRecord> groups;
  double residual_decomp = 0.0;  ///< ||U V - V diag(Lambda)||_F
  double residual_unitary = 0.0; ///< ||V^H V - I||_F
  double residual_reconstruction = 0.0;  ///< ||V diag(Lambda) V^H - U||_F
  bool reference_supplied = false;       ///< U given, rather than rebuilt from (Z, Sigma)
  double delta_group = kDefaultDeltaGroup;
  std::optional<double> tau_rank;
  double min_group_gap = 0.0;  ///< smallest phase gap between neighbouring groups
  bool near_degenerate = false;  ///< min_group_gap < 10 delta_group

  std::size_t total_rank() const noexcept {
    std::size_t r = 0;
    for (const GroupRecord& g : groups) r += g.rank;
    return r;
  }
};

/// Recovery failed after the groups were processed. The partial report is
/// kept so callers can still write it out.
class RecoveryError : public Error {
 public:
  enum class Kind { accounting, orthogonality };

  RecoveryError(Kind kind, const std::string& what, RecoveryReport report)
      : Error(what), kind_(kind), report_(std::move(report)) {}

  Kind kind() const noexcept { return kind_; }
  const RecoveryReport& report() const noexcept { return report_; }

 private:
  Kind kind_;
  RecoveryReport report_;
};

/// Unitary eigendecomposition U = V diag(Lambda) V^H from an eigendecomposition
/// of M = embed(U). For every group, X_mu = L Z_mu is rank-revealed by SVD;
/// a nonzero rank r contributes r orthonormal columns to V and r copies of mu
/// to Lambda.
///
/// Residuals are measured against `u` when given, otherwise against
/// U = L Z diag(sigma) Z^{-1} L^H / 2 rebuilt from the input.
///
/// Throws RecoveryError when the ranks do not sum to n, or when the
/// assembled V is not unitary within 1e-8 n. V is never re-orthonormalized.
RecoveryReport recover(const EigenDecomposition& e, const RecoverOptions& options = {});
RecoveryReport recover(const EigenDecomposition& e, const RecoverOptions& options,
                       const ComplexMatrix& u);

/// U rebuilt from an eigendecomposition of its embedding.
ComplexMatrix reconstruct_unitary(const EigenDecomposition& e);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct VerificationRecord {
  double residual_decomp = 0.0;
  double residual_unitary = 0.0;
  double residual_reconstruction = 0.0;
  double max_modulus_deviation = 0.0;  ///< max_k ||lambda_k| - 1|
  double threshold = 0.0;              ///< 1e-8 n
  std::vector<Check> checks;
  bool pass = false;
};

inline constexpr double kVerifyFactor = 1e-8;

VerificationRecord verify(const ComplexMatrix& u, const ComplexMatrix& v,
                          const std::vector<cplx>& lambda);
VerificationRecord verify(const ComplexMatrix& u, const RecoveryReport& r);

/// Principal logarithm generator: H = V diag(theta) V^H with theta_k the
/// phase of lambda_k in (-pi, pi], so that U = exp(iH).
struct UnitaryLog {
  ComplexMatrix h;
  std::vector<double> thetas;
  double hermiticity_residual = 0.0;  ///< ||H - H^H||_F
  bool branch_boundary = false;       ///< some lambda within 1e-12 of -1; theta = pi was used
};

UnitaryLog unitary_log(const ComplexMatrix& v, const std::vector<cplx>& lambda);
UnitaryLog unitary_log(const RecoveryReport& r);

/// V diag(exp(i theta)) V^H.
ComplexMatrix exp_i_from_eigenpairs(const ComplexMatrix& v, const std::vector<double>& thetas);

}  // namespace uniteig
