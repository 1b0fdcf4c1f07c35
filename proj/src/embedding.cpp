#include "uniteig/embedding.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "uniteig/matcore.hpp"

namespace uniteig {

namespace {

void stderr_sink(const char* message) { std::fprintf(stderr, "warning: %s\n", message); }

std::atomic<WarningSink> g_warning_sink{&stderr_sink};

constexpr double kUnitaryWarnFactor = 1e-8;
constexpr double kBuildWTolerance = 1e-8;

}  // namespace

void set_warning_sink(WarningSink sink) { g_warning_sink.store(sink ? sink : &stderr_sink); }

void emit_warning(const char* message) { g_warning_sink.load()(message); }

double RealEmbedding::block_discrepancy(const RealMatrix& m) {
  const std::size_t n = m.rows() / 2;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs(m(i, j) - m(n + i, n + j)));
      worst = std::max(worst, std::abs(m(i, n + j) + m(n + i, j)));
    }
  }
  return worst;
}

RealEmbedding RealEmbedding::from_matrix(const RealMatrix& m, double tolerance) {
  if (!m.square() || m.rows() % 2 != 0 || m.rows() == 0) {
    throw DimensionError("real embedding must be square with even, positive order, got " +
                         RealMatrix::shape_string(m.rows(), m.cols()));
  }
  const double discrepancy = block_discrepancy(m);
  if (discrepancy > tolerance) {
    throw StructureError("matrix violates the [[A,-B],[B,A]] block structure: max block discrepancy " +
                             std::to_string(discrepancy) + " exceeds " + std::to_string(tolerance),
                         discrepancy);
  }
  const std::size_t n = m.rows() / 2;
  RealMatrix out(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = 0.5 * (m(i, j) + m(n + i, n + j));
      const double b = 0.5 * (m(n + i, j) - m(i, n + j));
      out(i, j) = a;
      out(n + i, n + j) = a;
      out(n + i, j) = b;
      out(i, n + j) = -b;
    }
  }
  return RealEmbedding(n, std::move(out));
}

RealEmbedding embed(const ComplexMatrix& u) {
  if (!u.square() || u.rows() == 0) {
    throw DimensionError("embed needs a square, non-empty matrix, got " +
                         ComplexMatrix::shape_string(u.rows(), u.cols()));
  }
  const std::size_t n = u.rows();
  const double residual = unitarity_residual(u);
  if (residual > kUnitaryWarnFactor * static_cast<double>(n)) {
    emit_warning(("embedding a non-unitary matrix (||U^H U - I||_F = " + std::to_string(residual) +
                  "); recovery requires unitarity")
                     .c_str());
  }
  RealMatrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = u(i, j).real();
      const double b = u(i, j).imag();
      m(i, j) = a;
      m(n + i, n + j) = a;
      m(n + i, j) = b;
      m(i, n + j) = -b;
    }
  }
  return RealEmbedding(n, std::move(m));
}

ComplexMatrix extract(const RealEmbedding& m) {
  const std::size_t n = m.n();
  const RealMatrix& r = m.matrix();
  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u(i, j) = cplx(r(i, j), r(n + i, j));
  return u;
}

ComplexMatrix extract(const RealMatrix& m, double tolerance) {
  return extract(RealEmbedding::from_matrix(m, tolerance));
}

ComplexMatrix compress(const ComplexMatrix& m) {
  if (!m.square() || m.rows() % 2 != 0) {
    throw DimensionError("compress needs a square matrix of even order, got " +
                         ComplexMatrix::shape_string(m.rows(), m.cols()));
  }
  const std::size_t n = m.rows() / 2;
  const cplx i1(0.0, 1.0);
  ComplexMatrix u(n, n);
  // (L M L^H)_{jk} = M11 - i M12 + i M21 + M22
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      u(j, k) = 0.5 * (m(j, k) - i1 * m(j, n + k) + i1 * m(n + j, k) + m(n + j, n + k));
    }
  }
  return u;
}

KnownEigenbasis build_w(const ComplexMatrix& v, std::span<const cplx> lambda) {
  if (!v.square() || v.rows() != lambda.size()) {
    throw DimensionError("build_w: V is " + ComplexMatrix::shape_string(v.rows(), v.cols()) +
                         " but Lambda has " + std::to_string(lambda.size()) + " entries");
  }
  const std::size_t n = v.rows();
  if (unitarity_residual(v) > kBuildWTolerance * static_cast<double>(n)) {
    throw InputError("build_w: V is not unitary");
  }
  for (const cplx& l : lambda) {
    if (std::abs(std::abs(l) - 1.0) > kBuildWTolerance) {
      throw InputError("build_w: eigenvalue off the unit circle");
    }
  }
  const double h = 1.0 / std::numbers::sqrt2;
  const cplx i1(0.0, 1.0);
  KnownEigenbasis out{ComplexMatrix(2 * n, 2 * n), std::vector<cplx>(2 * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx x = v(i, j);
      out.w(i, j) = h * x;
      out.w(n + i, j) = -i1 * h * x;
      out.w(i, n + j) = -i1 * h * std::conj(x);
      out.w(n + i, n + j) = h * std::conj(x);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    out.sigma[k] = lambda[k];
    out.sigma[n + k] = std::conj(lambda[k]);
  }
  return out;
}

}  // namespace uniteig
