#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/oracle.hpp"
#include "uniteig/embedding.hpp"
#include "uniteig/fixtures.hpp"
#include "uniteig/matcore.hpp"
#include "uniteig/realeig.hpp"
#include "uniteig/unit_circle.hpp"

using namespace uniteig;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I1(0.0, 1.0);

SpectrumSpec planted_spec(std::uint64_t seed) {
  return {{{pi / 3, 3}, {0.0, 2}, {2 * pi / 5, 1}, {-2 * pi / 5, 1}, {pi, 1}}, seed};
}

std::vector<double> doubled(const std::vector<double>& thetas) {
  std::vector<double> out;
  for (double t : thetas) {
    out.push_back(t);
    out.push_back(-t);
  }
  return out;
}

void check_decomposition(const RealEmbedding& m, const EigenDecomposition& e) {
  const double dim = static_cast<double>(e.dim());
  CHECK(eig_residual(m, e) <= 1e-9 * dim);
  const auto s = svd(e.z).values;
  CHECK(s.back() >= 1e-10 * s.front());
  for (const cplx& v : e.sigma) CHECK(std::abs(std::abs(v) - 1.0) <= 1e-9);
  // conjugate symmetry
  std::vector<bool> used(e.sigma.size(), false);
  for (std::size_t a = 0; a < e.sigma.size(); ++a) {
    if (used[a]) continue;
    used[a] = true;
    if (std::abs(e.sigma[a].imag()) <= 1e-10) continue;
    bool found = false;
    for (std::size_t b = 0; b < e.sigma.size() && !found; ++b) {
      if (!used[b] && std::abs(e.sigma[b] - std::conj(e.sigma[a])) <= 1e-10) {
        used[b] = true;
        found = true;
      }
    }
    CHECK(found);
  }
}

}  // namespace

TEST_CASE("identity") {
  const RealEmbedding m = embed(ComplexMatrix::identity(1));
  const EigenDecomposition e = real_normal_eig(m);
  CHECK(e.sigma == std::vector<cplx>{1.0, 1.0});
  check_decomposition(m, e);
}

TEST_CASE("quarter rotation") {
  const RealEmbedding m = RealEmbedding::from_matrix(RealMatrix(2, 2, {0.0, -1.0, 1.0, 0.0}));
  const EigenDecomposition e = real_normal_eig(m);
  REQUIRE(e.dim() == 2);
  check_decomposition(m, e);
  // ordering: -i first, then i
  CHECK(std::abs(e.sigma[0] + I1) <= 1e-15);
  CHECK(std::abs(e.sigma[1] - I1) <= 1e-15);
  // eigenvector for i is proportional to [1, -i]
  const cplx ratio = e.z(1, 1) / e.z(0, 1);
  CHECK(std::abs(ratio + I1) <= 1e-15);
}

TEST_CASE("planted n = 8 spectrum with every degeneracy source") {
  const PlantedUnitary p = planted_unitary(planted_spec(17));
  const RealEmbedding m = embed(p.u);
  const EigenDecomposition e = real_normal_eig(m);
  check_decomposition(m, e);
  CHECK(oracle::multiset_phase_distance(oracle::phases_of(e.sigma), doubled(p.thetas)) <= 1e-8);
  // ordering by |phase| then phase
  for (std::size_t k = 1; k < e.dim(); ++k) {
    const double a = principal_phase(e.sigma[k - 1]);
    const double b = principal_phase(e.sigma[k]);
    CHECK((std::abs(a) < std::abs(b) + 1e-9));
  }
}

TEST_CASE("Haar unitaries of several sizes") {
  for (std::size_t n : {1u, 2u, 3u, 7u, 16u, 33u}) {
    const ComplexMatrix u = haar_unitary(n, 1000 + n);
    const RealEmbedding m = embed(u);
    const EigenDecomposition e = real_normal_eig(m);
    check_decomposition(m, e);
    std::vector<double> expected = doubled(oracle::normal_phases(u));
    CHECK(oracle::multiset_phase_distance(oracle::phases_of(e.sigma), expected) <= 1e-8);
  }
}

TEST_CASE("tiny rotation angles near +1 and -1") {
  const SpectrumSpec spec{{{0.0, 2}, {1e-6, 1}, {pi - 1e-5, 2}, {pi, 1}, {1.0, 1}}, 4};
  const PlantedUnitary p = planted_unitary(spec);
  const RealEmbedding m = embed(p.u);
  const EigenDecomposition e = real_normal_eig(m);
  check_decomposition(m, e);
  CHECK(oracle::multiset_phase_distance(oracle::phases_of(e.sigma), doubled(p.thetas)) <= 1e-8);
}

TEST_CASE("non-orthogonal input is rejected") {
  RealMatrix a = embed(ComplexMatrix::identity(2)).matrix();
  a *= 1.1;
  CHECK_THROWS_AS(real_normal_eig(RealEmbedding::from_matrix(a)), InputError);
}

TEST_CASE("eig_residual") {
  const double h = 1.0 / std::numbers::sqrt2;
  const RealMatrix m(2, 2, {0.0, -1.0, 1.0, 0.0});
  const EigenDecomposition exact{ComplexMatrix(2, 2, {h, h, -I1 * h, I1 * h}), {I1, -I1}};
  CHECK(eig_residual(m, exact) <= 1e-15);

  const EigenDecomposition trivial{ComplexMatrix::identity(2), {1.0, 1.0}};
  CHECK(eig_residual(RealMatrix::identity(2), trivial) == 0.0);

  EigenDecomposition noisy = exact;
  noisy.z += oracle::random_complex(2, 2, 3) * cplx(1e-3);
  const double r = eig_residual(m, noisy);
  CHECK(r >= 1e-5);
  CHECK(r <= 1e-1);

  CHECK_THROWS_AS(eig_residual(RealMatrix::identity(4), exact), DimensionError);
}
