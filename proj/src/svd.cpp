#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "uniteig/matcore.hpp"

namespace uniteig {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Pair sweeps are only parallelized when one round touches enough data.
constexpr std::size_t kParallelSvdWork = std::size_t{1} << 14;

// Column-major working copy: the Jacobi sweeps only ever touch whole columns.
template <typename T>
struct ColumnStore {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  ColumnStore(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  T* col(std::size_t j) { return data.data() + j * rows; }
  const T* col(std::size_t j) const { return data.data() + j * rows; }
};

template <typename T>
double squared_norm(const T* x, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += std::norm(x[i]);
  return s;
}

// Orthogonalizes columns p and q of U with a 2x2 unitary applied from the
// right; the same transform is accumulated into V. Returns false when the
// pair is already orthogonal to working precision.
template <typename T>
bool rotate_pair(ColumnStore<T>& u, ColumnStore<T>& v, std::size_t p, std::size_t q, double tol) {
  T* up = u.col(p);
  T* uq = u.col(q);
  double alpha = 0.0;
  double beta = 0.0;
  T gamma{};
  for (std::size_t i = 0; i < u.rows; ++i) {
    alpha += std::norm(up[i]);
    beta += std::norm(uq[i]);
    gamma += conj_if(up[i]) * uq[i];
  }
  const double g = std::abs(gamma);
  if (g == 0.0 || g <= tol * std::sqrt(alpha) * std::sqrt(beta)) return false;

  // Remove the phase of gamma from column q, then apply the real rotation
  // that diagonalizes the 2x2 Gram matrix [[alpha, g], [g, beta]].
  const T phase_conj = conj_if(gamma / g);
  const double zeta = (beta - alpha) / (2.0 * g);
  double t;
  if (std::abs(zeta) > 1e150) {
    t = 0.5 / zeta;
  } else {
    t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = c * t;

  auto apply = [&](T* xp, T* xq, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      const T a = xp[i];
      const T b = xq[i] * phase_conj;
      xp[i] = c * a - s * b;
      xq[i] = s * a + c * b;
    }
  };
  apply(up, uq, u.rows);
  apply(v.col(p), v.col(q), v.rows);
  return true;
}

template <typename T>
Matrix<T> to_matrix(const ColumnStore<T>& s, std::span<const std::size_t> order) {
  Matrix<T> out(s.rows, order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const T* c = s.col(order[k]);
    for (std::size_t i = 0; i < s.rows; ++i) out(i, k) = c[i];
  }
  return out;
}

// Extends the unit columns [0, filled) of `left` with orthonormal columns in
// positions [filled, cols) by Gram-Schmidt over the standard basis.
template <typename T>
void complete_orthonormal(Matrix<T>& left, std::size_t filled) {
  const std::size_t m = left.rows();
  std::vector<T> w(m);
  std::size_t next_unit = 0;
  for (std::size_t k = filled; k < left.cols(); ++k) {
    bool placed = false;
    while (!placed && next_unit < m) {
      std::fill(w.begin(), w.end(), T{});
      w[next_unit++] = T(1);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < k; ++j) {
          T dot{};
          for (std::size_t i = 0; i < m; ++i) dot += conj_if(left(i, j)) * w[i];
          for (std::size_t i = 0; i < m; ++i) w[i] -= dot * left(i, j);
        }
      }
      const double nrm = std::sqrt(squared_norm(w.data(), m));
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < m; ++i) left(i, k) = w[i] / nrm;
        placed = true;
      }
    }
  }
}

template <typename T>
SingularSpectrum<T> finish(ColumnStore<T>& u, ColumnStore<T>& v) {
  const std::size_t n = u.cols;
  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(squared_norm(u.col(j), u.rows));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

  SingularSpectrum<T> out;
  out.values.resize(n);
  out.left = to_matrix(u, order);
  out.right = to_matrix(v, order);
  std::size_t nonzero = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double sv = norms[order[k]];
    out.values[k] = sv;
    if (sv > std::numeric_limits<double>::min()) {
      for (std::size_t i = 0; i < u.rows; ++i) out.left(i, k) /= sv;
      ++nonzero;
    }
  }
  if (nonzero < n) {
    for (std::size_t k = nonzero; k < n; ++k) out.values[k] = 0.0;
    complete_orthonormal(out.left, nonzero);
  }
  return out;
}

enum class Ordering { round_robin, cyclic };

template <typename T>
SingularSpectrum<T> jacobi_svd_tall(const Matrix<T>& a, Ordering ordering) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ColumnStore<T> u(m, n);
  ColumnStore<T> v(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    T* c = u.col(j);
    for (std::size_t i = 0; i < m; ++i) c[i] = a(i, j);
    v.col(j)[j] = T(1);
  }
  const double tol = kEps * static_cast<double>(std::max<std::size_t>(m, 1));

  // Round-robin tournament: every round pairs each column with a distinct
  // partner; a dummy slot (index n) pads odd counts.
  const std::size_t slots = n + (n % 2);
  std::vector<std::size_t> arrangement(slots);
  std::iota(arrangement.begin(), arrangement.end(), std::size_t{0});
  const bool parallel = ordering == Ordering::round_robin && m * n >= kParallelSvdWork;

  for (std::size_t sweep = 1; sweep <= kMaxJacobiSweeps; ++sweep) {
    int rotated = 0;
    if (ordering == Ordering::cyclic) {
      for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) rotated |= rotate_pair(u, v, p, q, tol) ? 1 : 0;
    } else {
      for (std::size_t round = 0; round + 1 < slots; ++round) {
        const auto half = static_cast<std::ptrdiff_t>(slots / 2);
#pragma omp parallel for schedule(static) reduction(| : rotated) if (parallel)
        for (std::ptrdiff_t k = 0; k < half; ++k) {
          std::size_t p = arrangement[static_cast<std::size_t>(k)];
          std::size_t q = arrangement[slots - 1 - static_cast<std::size_t>(k)];
          if (p == n || q == n) continue;
          if (p > q) std::swap(p, q);
          rotated |= rotate_pair(u, v, p, q, tol) ? 1 : 0;
        }
        std::rotate(arrangement.begin() + 1, arrangement.end() - 1, arrangement.end());
      }
    }
    if (!rotated) return finish(u, v);
  }
  throw ConvergenceError("one-sided Jacobi SVD did not converge", kMaxJacobiSweeps);
}

template <typename T>
SingularSpectrum<T> jacobi_svd(const Matrix<T>& a, Ordering ordering) {
  if (a.rows() == 0 || a.cols() == 0) {
    SingularSpectrum<T> out;
    out.left = Matrix<T>(a.rows(), 0);
    out.right = Matrix<T>(a.cols(), 0);
    return out;
  }
  if (a.rows() < a.cols()) {
    // A^H = L S R^H  =>  A = R S L^H
    SingularSpectrum<T> t = jacobi_svd_tall(adjoint(a), ordering);
    std::swap(t.left, t.right);
    return t;
  }
  return jacobi_svd_tall(a, ordering);
}

}  // namespace

template <typename T>
SingularSpectrum<T> svd(const Matrix<T>& a) {
  return jacobi_svd(a, Ordering::round_robin);
}

namespace reference {

template <typename T>
SingularSpectrum<T> svd(const Matrix<T>& a) {
  return jacobi_svd(a, Ordering::cyclic);
}

template SingularSpectrum<double> svd(const RealMatrix&);
template SingularSpectrum<cplx> svd(const ComplexMatrix&);

}  // namespace reference

template SingularSpectrum<double> svd(const RealMatrix&);
template SingularSpectrum<cplx> svd(const ComplexMatrix&);

}  // namespace uniteig
