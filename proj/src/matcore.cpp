#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uniteig/matcore.hpp"

namespace uniteig {

namespace {

template <typename T>
double gram_residual(const Matrix<T>& a, const char* who) {
  if (!a.square()) {
    throw DimensionError(std::string(who) + " needs a square matrix, got " +
                         Matrix<T>::shape_string(a.rows(), a.cols()));
  }
  Matrix<T> g = gemm(adjoint(a), a);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= T(1);
  return frobenius_norm(g);
}

}  // namespace

double unitarity_residual(const ComplexMatrix& a) { return gram_residual(a, "unitarity_residual"); }

double orthogonality_residual(const RealMatrix& a) {
  return gram_residual(a, "orthogonality_residual");
}

RangeBasis range_basis(const ComplexMatrix& x, std::optional<double> tol) {
  if (tol && !(*tol >= 0.0)) throw InputError("range_basis tolerance must be nonnegative");
  RangeBasis out;
  SingularSpectrum<cplx> s = svd(x);
  const double sigma_max = s.values.empty() ? 0.0 : s.values.front();
  out.tau = tol ? *tol
                : static_cast<double>(std::max(x.rows(), x.cols())) * sigma_max * kAutoRankFactor;
  out.rank = static_cast<std::size_t>(
      std::count_if(s.values.begin(), s.values.end(), [&](double v) { return v > out.tau; }));
  out.q = s.left.block(0, 0, x.rows(), out.rank);
  out.values = std::move(s.values);
  return out;
}

std::vector<double> principal_angles(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("principal_angles: ambient dimensions " + std::to_string(a.rows()) +
                         " and " + std::to_string(b.rows()) + " differ");
  }
  ComplexMatrix qa = range_basis(a).q;
  ComplexMatrix qb = range_basis(b).q;
  if (qa.cols() < qb.cols()) std::swap(qa, qb);
  // Sines of the angles are the singular values of (I - Qa Qa^H) Qb.
  const ComplexMatrix residual = qb - gemm(qa, gemm(adjoint(qa), qb));
  std::vector<double> angles;
  for (double s : svd(residual).values) angles.push_back(std::asin(std::min(1.0, s)));
  std::sort(angles.begin(), angles.end());
  return angles;
}

double largest_principal_angle(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (range_basis(a).rank != range_basis(b).rank) return std::numbers::pi / 2;
  const std::vector<double> angles = principal_angles(a, b);
  return angles.empty() ? 0.0 : angles.back();
}

}  // namespace uniteig
