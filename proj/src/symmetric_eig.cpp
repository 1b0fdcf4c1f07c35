#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "uniteig/matcore.hpp"

namespace uniteig {

SymmetricEigen symmetric_eig(const RealMatrix& a) {
  if (!a.square()) {
    throw DimensionError("symmetric_eig needs a square matrix, got " +
                         RealMatrix::shape_string(a.rows(), a.cols()));
  }
  const std::size_t n = a.rows();
  RealMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + a(j, i));
  RealMatrix vecs = RealMatrix::identity(n);

  const double threshold = std::numeric_limits<double>::epsilon() * frobenius_norm(w) /
                           static_cast<double>(std::max<std::size_t>(n, 1));
  bool converged = n < 2;
  for (std::size_t sweep = 1; sweep <= kMaxJacobiSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (std::abs(apq) <= threshold) continue;
        rotated = true;
        const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t = std::abs(theta) > 1e150
                             ? 0.5 / theta
                             : (theta >= 0.0 ? 1.0 : -1.0) /
                                   (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = w(k, p);
          const double akq = w(k, q);
          w(k, p) = c * akp - s * akq;
          w(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = w(p, k);
          const double aqk = w(q, k);
          w(p, k) = c * apk - s * aqk;
          w(q, k) = s * apk + c * aqk;
        }
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vecs(k, p);
          const double vkq = vecs(k, q);
          vecs(k, p) = c * vkp - s * vkq;
          vecs(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) throw ConvergenceError("symmetric Jacobi did not converge", kMaxJacobiSweeps);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return w(x, x) < w(y, y); });
  SymmetricEigen out;
  out.values.reserve(n);
  for (std::size_t k : order) out.values.push_back(w(k, k));
  out.vectors = vecs.columns(order);
  return out;
}

}  // namespace uniteig
