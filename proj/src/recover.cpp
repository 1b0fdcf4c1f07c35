#include "uniteig/recover.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "uniteig/embedding.hpp"
#include "uniteig/matcore.hpp"
#include "uniteig/unit_circle.hpp"

namespace uniteig {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBranchTolerance = 1e-12;

ComplexMatrix scale_columns(const ComplexMatrix& v, const std::vector<cplx>& d) {
  ComplexMatrix out = v;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= d[j];
  return out;
}

// Solves R X = B for upper triangular R.
ComplexMatrix back_substitute(const ComplexMatrix& r, ComplexMatrix b) {
  const std::size_t n = r.rows();
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = n; i-- > 0;) {
      cplx s = b(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= r(i, k) * b(k, c);
      b(i, c) = s / r(i, i);
    }
  }
  return b;
}

std::string describe_groups(const std::vector<GroupRecord>& groups) {
  std::ostringstream os;
  os.precision(6);
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const GroupRecord& g = groups[k];
    os << (k ? ", " : "") << "{phase " << principal_phase(g.mu) << ": m_M " << g.m_m << ", rank "
       << g.rank << "}";
  }
  return os.str();
}

}  // namespace

std::vector<EigenGroup> group_eigenvalues(const EigenDecomposition& e, double delta_group) {
  const std::size_t dim = e.sigma.size();
  if (dim == 0) throw InputError("group_eigenvalues: empty decomposition");
  if (e.z.rows() != dim || e.z.cols() != dim) {
    throw DimensionError("group_eigenvalues: Z is " +
                         ComplexMatrix::shape_string(e.z.rows(), e.z.cols()) + " but Sigma has " +
                         std::to_string(dim) + " entries");
  }
  if (!(delta_group > 0.0)) throw InputError("group_eigenvalues: delta_group must be positive");
  for (const cplx& s : e.sigma) {
    if (!(std::abs(std::abs(s) - 1.0) <= kModulusGate)) {
      std::ostringstream os;
      os << "eigenvalue " << s.real() << (s.imag() < 0 ? "-" : "+") << std::abs(s.imag())
         << "i has modulus " << std::abs(s) << ": input not from an orthogonal embedding";
      throw SpectrumError(os.str());
    }
  }

  std::vector<double> phase(dim);
  for (std::size_t k = 0; k < dim; ++k) phase[k] = principal_phase(e.sigma[k]);
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return phase[a] < phase[b]; });

  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t k = 0; k < dim; ++k) {
    if (k == 0 || phase[order[k]] - phase[order[k - 1]] > delta_group) clusters.emplace_back();
    clusters.back().push_back(order[k]);
  }
  // Close the circle: the last cluster (near +pi) may chain into the first (near -pi).
  if (clusters.size() > 1 &&
      phase[clusters.front().front()] + kTwoPi - phase[clusters.back().back()] <= delta_group) {
    std::vector<std::size_t> merged = std::move(clusters.back());
    clusters.pop_back();
    merged.insert(merged.end(), clusters.front().begin(), clusters.front().end());
    clusters.front() = std::move(merged);
  }

  std::vector<EigenGroup> groups;
  groups.reserve(clusters.size());
  for (auto& idx : clusters) {
    EigenGroup g;
    cplx direction{};
    for (std::size_t k : idx) {
      g.raw_mus.push_back(e.sigma[k]);
      direction += e.sigma[k] / std::abs(e.sigma[k]);
    }
    g.mu = std::polar(1.0, std::arg(direction));
    g.columns = e.z.columns(idx);
    g.indices = std::move(idx);
    groups.push_back(std::move(g));
  }
  std::stable_sort(groups.begin(), groups.end(), [](const EigenGroup& a, const EigenGroup& b) {
    return principal_phase(a.mu) < principal_phase(b.mu);
  });
  return groups;
}

ComplexMatrix project_l(const ComplexMatrix& z) {
  if (z.rows() % 2 != 0) {
    throw DimensionError("project_l needs an even row count, got " +
                         ComplexMatrix::shape_string(z.rows(), z.cols()));
  }
  const std::size_t n = z.rows() / 2;
  ComplexMatrix x(n, z.cols());
  const cplx i1(0.0, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < z.cols(); ++k) x(j, k) = z(j, k) + i1 * z(n + j, k);
  return x;
}

ComplexMatrix reconstruct_unitary(const EigenDecomposition& e) {
  const std::size_t dim = e.dim();
  if (e.z.rows() != dim || e.z.cols() != dim || dim % 2 != 0) {
    throw DimensionError("reconstruct_unitary: Z is " +
                         ComplexMatrix::shape_string(e.z.rows(), e.z.cols()) + ", Sigma has " +
                         std::to_string(dim) + " entries");
  }
  const QrFactors<cplx> qr = householder_qr(e.z);
  double dmax = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dim; ++k) {
    dmax = std::max(dmax, qr.r(k, k).real());
    dmin = std::min(dmin, qr.r(k, k).real());
  }
  if (!(dmin > 1e-14 * dmax)) throw InputError("reconstruct_unitary: Z is numerically singular");
  // M = Z diag(sigma) Z^{-1}, Z^{-1} = R^{-1} Q^H
  const ComplexMatrix z_inv = back_substitute(qr.r, adjoint(qr.q));
  return compress(gemm(scale_columns(e.z, e.sigma), z_inv));
}

namespace {

RecoveryReport run_recover(const EigenDecomposition& e, const RecoverOptions& options,
                           const ComplexMatrix* u) {
  if (e.dim() % 2 != 0) {
    throw DimensionError("recover: decomposition dimension " + std::to_string(e.dim()) +
                         " is odd");
  }
  if (options.tau_rank && !(*options.tau_rank >= 0.0)) {
    throw InputError("recover: tau_rank must be nonnegative");
  }
  const std::size_t n = e.dim() / 2;
  const std::vector<EigenGroup> groups = group_eigenvalues(e, options.delta_group);

  RecoveryReport report;
  report.delta_group = options.delta_group;
  report.tau_rank = options.tau_rank;
  report.groups.resize(groups.size());

  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(groups.size());
#pragma omp parallel for schedule(dynamic) if (options.parallel && count > 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      const EigenGroup& g = groups[static_cast<std::size_t>(k)];
      GroupRecord& rec = report.groups[static_cast<std::size_t>(k)];
      rec.mu = g.mu;
      rec.raw_mean = std::accumulate(g.raw_mus.begin(), g.raw_mus.end(), cplx{}) /
                     static_cast<double>(g.raw_mus.size());
      rec.m_m = g.multiplicity();
      if (options.tau_rank) {
        rec.tau = *options.tau_rank;
      } else {
        // Scale by Z_mu, not X_mu: a group with m_U = 0 projects to pure
        // rounding noise, which a threshold relative to X would call rank >= 1.
        const double z_norm = svd(g.columns).values.front();
        rec.tau = static_cast<double>(std::max(n, rec.m_m)) * z_norm * kAutoRankFactor;
      }
      RangeBasis rb = range_basis(project_l(g.columns), rec.tau);
      rec.rank = rb.rank;
      rec.m_ubar = rec.m_m - rec.rank;
      rec.singular_values = std::move(rb.values);
      rec.basis = std::move(rb.q);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  report.v = ComplexMatrix(n, 0);
  for (const GroupRecord& rec : report.groups) {
    report.v = hconcat(report.v, rec.basis);
    report.lambda.insert(report.lambda.end(), rec.rank, rec.mu);
  }

  if (report.groups.size() > 1) {
    report.min_group_gap = kTwoPi;
    for (std::size_t k = 0; k < report.groups.size(); ++k) {
      const cplx a = report.groups[k].mu;
      const cplx b = report.groups[(k + 1) % report.groups.size()].mu;
      report.min_group_gap = std::min(report.min_group_gap, angle_distance(a, b));
    }
  } else {
    report.min_group_gap = kTwoPi;
  }
  report.near_degenerate = report.min_group_gap < 10.0 * options.delta_group;

  if (report.total_rank() != n) {
    std::ostringstream os;
    os << "multiplicity accounting failure: ranks sum to " << report.total_rank() << ", expected "
       << n << "; groups " << describe_groups(report.groups) << "; delta_group "
       << options.delta_group << ", tau_rank "
       << (options.tau_rank ? std::to_string(*options.tau_rank) : std::string("auto"));
    throw RecoveryError(RecoveryError::Kind::accounting, os.str(), std::move(report));
  }

  report.reference_supplied = u != nullptr;
  const ComplexMatrix rebuilt = u ? ComplexMatrix{} : reconstruct_unitary(e);
  const VerificationRecord check = verify(u ? *u : rebuilt, report.v, report.lambda);
  report.residual_decomp = check.residual_decomp;
  report.residual_unitary = check.residual_unitary;
  report.residual_reconstruction = check.residual_reconstruction;

  if (report.residual_unitary > kVerifyFactor * static_cast<double>(n)) {
    std::ostringstream os;
    os << "recovered V is not unitary (||V^H V - I||_F = " << report.residual_unitary
       << "); eigenspaces from different groups overlap, consider retuning delta_group";
    throw RecoveryError(RecoveryError::Kind::orthogonality, os.str(), std::move(report));
  }
  return report;
}

}  // namespace

RecoveryReport recover(const EigenDecomposition& e, const RecoverOptions& options) {
  return run_recover(e, options, nullptr);
}

RecoveryReport recover(const EigenDecomposition& e, const RecoverOptions& options,
                       const ComplexMatrix& u) {
  if (!u.square() || 2 * u.rows() != e.dim()) {
    throw DimensionError("recover: U is " + ComplexMatrix::shape_string(u.rows(), u.cols()) +
                         " but the decomposition has dimension " + std::to_string(e.dim()));
  }
  return run_recover(e, options, &u);
}

VerificationRecord verify(const ComplexMatrix& u, const ComplexMatrix& v,
                          const std::vector<cplx>& lambda) {
  const std::size_t n = u.rows();
  if (!u.square() || v.rows() != n || v.cols() != n || lambda.size() != n) {
    throw DimensionError("verify: U is " + ComplexMatrix::shape_string(u.rows(), u.cols()) +
                         ", V is " + ComplexMatrix::shape_string(v.rows(), v.cols()) +
                         ", Lambda has " + std::to_string(lambda.size()) + " entries");
  }
  VerificationRecord rec;
  const ComplexMatrix v_lambda = scale_columns(v, lambda);
  rec.residual_decomp = frobenius_norm(gemm(u, v) - v_lambda);
  rec.residual_unitary = unitarity_residual(v);
  rec.residual_reconstruction = frobenius_norm(gemm(v_lambda, adjoint(v)) - u);
  for (const cplx& l : lambda) {
    rec.max_modulus_deviation = std::max(rec.max_modulus_deviation, std::abs(std::abs(l) - 1.0));
  }
  rec.threshold = kVerifyFactor * static_cast<double>(std::max<std::size_t>(n, 1));
  auto add = [&](const char* name, double value) {
    rec.checks.push_back({name, value, rec.threshold, value <= rec.threshold});
  };
  add("decomposition", rec.residual_decomp);
  add("unitarity", rec.residual_unitary);
  add("reconstruction", rec.residual_reconstruction);
  add("eigenvalue_modulus", rec.max_modulus_deviation);
  rec.pass = std::all_of(rec.checks.begin(), rec.checks.end(),
                         [](const Check& c) { return c.passed; });
  return rec;
}

VerificationRecord verify(const ComplexMatrix& u, const RecoveryReport& r) {
  return verify(u, r.v, r.lambda);
}

UnitaryLog unitary_log(const ComplexMatrix& v, const std::vector<cplx>& lambda) {
  if (!v.square() || v.rows() != lambda.size()) {
    throw DimensionError("unitary_log: V is " + ComplexMatrix::shape_string(v.rows(), v.cols()) +
                         " but Lambda has " + std::to_string(lambda.size()) + " entries");
  }
  UnitaryLog out;
  out.thetas.reserve(lambda.size());
  for (const cplx& l : lambda) {
    if (std::abs(l + 1.0) <= kBranchTolerance) {
      out.branch_boundary = true;
      out.thetas.push_back(std::numbers::pi);
    } else {
      out.thetas.push_back(principal_phase(l));
    }
  }
  std::vector<cplx> d(out.thetas.begin(), out.thetas.end());
  out.h = gemm(scale_columns(v, d), adjoint(v));
  out.hermiticity_residual = frobenius_norm(out.h - adjoint(out.h));
  return out;
}

UnitaryLog unitary_log(const RecoveryReport& r) { return unitary_log(r.v, r.lambda); }

ComplexMatrix exp_i_from_eigenpairs(const ComplexMatrix& v, const std::vector<double>& thetas) {
  std::vector<cplx> d;
  d.reserve(thetas.size());
  for (double t : thetas) d.push_back(std::polar(1.0, t));
  return gemm(scale_columns(v, d), adjoint(v));
}

}  // namespace uniteig
