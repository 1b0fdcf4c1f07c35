#include <cmath>
#include <cstddef>
#include <vector>

#include "uniteig/matcore.hpp"

namespace uniteig {

namespace {

double magnitude(double x) { return std::abs(x); }
double magnitude(const cplx& z) { return std::abs(z); }

// Unit scalar with the direction of x; 1 for x == 0.
template <typename T>
T unit_phase(const T& x) {
  const double m = magnitude(x);
  return m == 0.0 ? T(1) : x / m;
}

struct Reflector {
  std::size_t start = 0;
  double scale = 0.0;  // 2 / (v^H v), 0 for the identity
};

// Applies H = I - scale * v v^H to columns [c0, c1) of `a`, rows [start, m).
template <typename T>
void apply_reflector(Matrix<T>& a, const std::vector<T>& v, const Reflector& h, std::size_t c0,
                     std::size_t c1) {
  if (h.scale == 0.0) return;
  for (std::size_t j = c0; j < c1; ++j) {
    T s{};
    for (std::size_t i = h.start; i < a.rows(); ++i) s += conj_if(v[i - h.start]) * a(i, j);
    s *= h.scale;
    for (std::size_t i = h.start; i < a.rows(); ++i) a(i, j) -= s * v[i - h.start];
  }
}

}  // namespace

template <typename T>
QrFactors<T> householder_qr(const Matrix<T>& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) {
    throw DimensionError("householder_qr needs rows >= cols, got " + Matrix<T>::shape_string(m, n));
  }
  Matrix<T> r = a;
  std::vector<std::vector<T>> vs(n);
  std::vector<Reflector> hs(n);

  for (std::size_t k = 0; k < n; ++k) {
    std::vector<T>& v = vs[k];
    v.resize(m - k);
    double xnorm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) {
      v[i - k] = r(i, k);
      xnorm2 += std::norm(r(i, k));
    }
    hs[k].start = k;
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm == 0.0) continue;
    const T alpha = -unit_phase(v[0]) * xnorm;
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (const T& x : v) vnorm2 += std::norm(x);
    if (vnorm2 == 0.0) continue;
    hs[k].scale = 2.0 / vnorm2;
    apply_reflector(r, v, hs[k], k + 1, n);
    r(k, k) = alpha;
    for (std::size_t i = k + 1; i < m; ++i) r(i, k) = T{};
  }

  Matrix<T> q(m, n);
  for (std::size_t j = 0; j < n; ++j) q(j, j) = T(1);
  for (std::size_t k = n; k-- > 0;) apply_reflector(q, vs[k], hs[k], 0, n);

  QrFactors<T> out{std::move(q), r.block(0, 0, n, n)};
  // Fix phases so that diag(R) is real and nonnegative.
  for (std::size_t k = 0; k < n; ++k) {
    const T d = out.r(k, k);
    const double md = magnitude(d);
    if (md == 0.0) continue;
    const T ph = d / md;
    const T phc = conj_if(ph);
    for (std::size_t j = k; j < n; ++j) out.r(k, j) *= phc;
    out.r(k, k) = T(md);
    for (std::size_t i = 0; i < m; ++i) out.q(i, k) *= ph;
  }
  return out;
}

template QrFactors<double> householder_qr(const RealMatrix&);
template QrFactors<cplx> householder_qr(const ComplexMatrix&);

}  // namespace uniteig
