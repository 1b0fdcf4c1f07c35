#include "uniteig/realeig.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "uniteig/matcore.hpp"
#include "uniteig/unit_circle.hpp"

namespace uniteig {

namespace {

constexpr double kOrthogonalityFactor = 1e-8;
constexpr double kSineZeroTolerance = 1e-10;

struct EigenPairOut {
  cplx value;
  std::vector<cplx> vector;
};

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

void orthogonalize(Vec& x, const std::vector<Vec>& basis) {
  for (const Vec& b : basis) {
    const double d = dot(b, x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= d * b[i];
  }
}

Vec mat_vec(const RealMatrix& a, const Vec& x) {
  Vec y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// Groups descending values into runs whose consecutive gaps are <= tol.
// Returns [begin, end) index ranges.
std::vector<std::pair<std::size_t, std::size_t>> runs(const std::vector<double>& sorted, double tol) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = 0;
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    const bool split = k == sorted.size() || sorted[k - 1] - sorted[k] > tol;
    if (split) {
      out.emplace_back(begin, k);
      begin = k;
    }
  }
  return out;
}

// Clusters of the ascending eigenvalues of C. A cut needs a gap above the
// degeneracy tolerance, and, inside the merge window, a cosine gap at least as
// large as the sine gap: otherwise the skew part separates the pair better.
std::vector<std::pair<std::size_t, std::size_t>> cosine_clusters(const std::vector<double>& c) {
  const auto sine = [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); };
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = 0;
  for (std::size_t k = 1; k <= c.size(); ++k) {
    bool split = k == c.size();
    if (!split) {
      const double gap = c[k] - c[k - 1];
      const double sine_gap = std::abs(sine(c[k]) - sine(c[k - 1]));
      split = gap > kCosineClusterTolerance && (gap >= kCosineMergeWindow || sine_gap <= gap);
    }
    if (split) {
      out.emplace_back(begin, k);
      begin = k;
    }
  }
  return out;
}

// Eigenpairs of M restricted to one cluster of C, spanned by the columns of p.
std::vector<EigenPairOut> resolve_cluster(const RealMatrix& m, const RealMatrix& skew,
                                          const RealMatrix& p) {
  const std::size_t dim = p.rows();
  const std::size_t k = p.cols();
  const RealMatrix kc = gemm(adjoint(p), gemm(skew, p));
  const SingularSpectrum<double> sv = svd(kc);

  auto lift = [&](const Vec& y) {
    Vec x(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < k; ++j) x[i] += p(i, j) * y[j];
    return x;
  };

  std::vector<EigenPairOut> out;
  std::vector<double> sines = sv.values;
  std::size_t nonzero = 0;
  while (nonzero < sines.size() && sines[nonzero] > kSineZeroTolerance) ++nonzero;

  // sin(theta) = 0: real eigenvalues +1 or -1.
  for (std::size_t j = nonzero; j < k; ++j) {
    Vec x = lift(sv.right.col(j));
    const double nx = norm2(x);
    for (double& xi : x) xi /= nx;
    const double c = dot(x, mat_vec(m, x));
    EigenPairOut e{cplx(c >= 0.0 ? 1.0 : -1.0, 0.0), std::vector<cplx>(x.begin(), x.end())};
    out.push_back(std::move(e));
  }

  // sin(theta) > 0: pair up each level into (x, Kx/|Kx|).
  sines.resize(nonzero);
  const double h = 1.0 / std::numbers::sqrt2;
  for (const auto& [begin, end] : runs(sines, kSineZeroTolerance)) {
    const std::size_t level_dim = end - begin;
    if (level_dim % 2 != 0) {
      throw Error("real_normal_eig: odd-dimensional rotation level (" + std::to_string(level_dim) +
                  ") cannot be paired; the input is not normal to working precision");
    }
    std::vector<Vec> chosen;
    while (chosen.size() < level_dim) {
      // Take the level vector least represented by the pairs found so far.
      Vec x;
      double best = -1.0;
      for (std::size_t j = begin; j < end; ++j) {
        Vec cand = sv.right.col(j);
        orthogonalize(cand, chosen);
        orthogonalize(cand, chosen);
        const double nc = norm2(cand);
        if (nc > best) {
          best = nc;
          x = std::move(cand);
        }
      }
      if (best < 1e-3) {
        throw Error("real_normal_eig: failed to pair a rotation level of dimension " +
                    std::to_string(level_dim));
      }
      for (double& xi : x) xi /= best;
      Vec w = mat_vec(kc, x);
      orthogonalize(w, chosen);
      const double xw = dot(x, w);
      for (std::size_t i = 0; i < k; ++i) w[i] -= xw * x[i];
      const double nw = norm2(w);
      for (double& wi : w) wi /= nw;
      chosen.push_back(x);
      chosen.push_back(w);

      const Vec xf = lift(x);
      const Vec wf = lift(w);
      const Vec mx = mat_vec(m, xf);
      const cplx value(dot(xf, mx), dot(wf, mx));
      std::vector<cplx> plus(dim);
      std::vector<cplx> minus(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        plus[i] = h * cplx(xf[i], -wf[i]);
        minus[i] = h * cplx(xf[i], wf[i]);
      }
      out.push_back({value, std::move(plus)});
      out.push_back({std::conj(value), std::move(minus)});
    }
  }
  return out;
}

}  // namespace

EigenDecomposition real_normal_eig(const RealEmbedding& embedding) {
  const RealMatrix& m = embedding.matrix();
  const std::size_t dim = m.rows();
  const double ortho = orthogonality_residual(m);
  if (ortho > kOrthogonalityFactor * static_cast<double>(embedding.n())) {
    throw InputError("real_normal_eig: M is not orthogonal (||M^T M - I||_F = " +
                     std::to_string(ortho) + ")");
  }

  RealMatrix sym(dim, dim);
  RealMatrix skew(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      sym(i, j) = 0.5 * (m(i, j) + m(j, i));
      skew(i, j) = 0.5 * (m(i, j) - m(j, i));
    }
  }
  const SymmetricEigen ce = symmetric_eig(sym);
  const auto clusters = cosine_clusters(ce.values);

  std::vector<std::vector<EigenPairOut>> per_cluster(clusters.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(clusters.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < count; ++c) {
    try {
      const auto [begin, end] = clusters[static_cast<std::size_t>(c)];
      const RealMatrix p = ce.vectors.block(0, begin, dim, end - begin);
      per_cluster[static_cast<std::size_t>(c)] = resolve_cluster(m, skew, p);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<EigenPairOut> pairs;
  pairs.reserve(dim);
  for (auto& v : per_cluster)
    for (auto& e : v) pairs.push_back(std::move(e));
  std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPairOut& a, const EigenPairOut& b) {
    const double pa = principal_phase(a.value);
    const double pb = principal_phase(b.value);
    if (std::abs(pa) != std::abs(pb)) return std::abs(pa) < std::abs(pb);
    return pa < pb;
  });

  EigenDecomposition out{ComplexMatrix(dim, dim), std::vector<cplx>(dim)};
  for (std::size_t j = 0; j < dim; ++j) {
    out.sigma[j] = pairs[j].value;
    out.z.set_col(j, pairs[j].vector);
  }
  return out;
}

double eig_residual(const RealMatrix& m, const EigenDecomposition& e) {
  if (!m.square() || m.rows() != e.z.rows() || e.z.cols() != e.sigma.size()) {
    throw DimensionError("eig_residual: M is " + RealMatrix::shape_string(m.rows(), m.cols()) +
                         ", Z is " + ComplexMatrix::shape_string(e.z.rows(), e.z.cols()) +
                         ", Sigma has " + std::to_string(e.sigma.size()) + " entries");
  }
  ComplexMatrix r = gemm(to_complex(m), e.z);
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) -= e.z(i, j) * e.sigma[j];
  return frobenius_norm(r) / std::max(1.0, frobenius_norm(m));
}

double eig_residual(const RealEmbedding& m, const EigenDecomposition& e) {
  return eig_residual(m.matrix(), e);
}

}  // namespace uniteig
