#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "support/oracle.hpp"
#include "uniteig/embedding.hpp"
#include "uniteig/fixtures.hpp"
#include "uniteig/matcore.hpp"
#include "uniteig/realeig.hpp"
#include "uniteig/recover.hpp"
#include "uniteig/unit_circle.hpp"

using namespace uniteig;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I1(0.0, 1.0);

EigenDecomposition diagonal_decomposition(std::vector<cplx> sigma) {
  return {ComplexMatrix::identity(sigma.size()), std::move(sigma)};
}

struct Pipeline {
  PlantedUnitary planted;
  EigenDecomposition eig;
};

Pipeline run(const SpectrumSpec& spec) {
  Pipeline p{planted_unitary(spec), {}};
  p.eig = real_normal_eig(embed(p.planted.u));
  return p;
}

// Columns of the planted V whose phase matches mu.
ComplexMatrix planted_block(const PlantedUnitary& p, const cplx& mu) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < p.thetas.size(); ++k)
    if (angle_distance(p.thetas[k], principal_phase(mu)) <= 1e-6) idx.push_back(k);
  return p.v.columns(idx);
}

}  // namespace

TEST_SUITE("group_eigenvalues") {
  TEST_CASE("double eigenvalue 1") {
    const auto g = group_eigenvalues(diagonal_decomposition({1.0, 1.0}), 1e-8);
    REQUIRE(g.size() == 1);
    CHECK(g[0].multiplicity() == 2);
    CHECK(g[0].columns.cols() == 2);
  }

  TEST_CASE("antipodal pair stays split") {
    const auto g = group_eigenvalues(diagonal_decomposition({I1, -I1}), 1e-8);
    REQUIRE(g.size() == 2);
    CHECK(g[0].multiplicity() == 1);
    CHECK(g[1].multiplicity() == 1);
    CHECK(std::abs(g[0].mu + I1) <= 1e-15);
  }

  TEST_CASE("perturbation below delta merges") {
    const auto g = group_eigenvalues(
        diagonal_decomposition({std::polar(1.0, pi / 3), std::polar(1.0, pi / 3 + 1e-12),
                                std::polar(1.0, -pi / 3)}),
        1e-8);
    REQUIRE(g.size() == 2);
    CHECK(g[0].multiplicity() == 1);
    CHECK(principal_phase(g[0].mu) == doctest::Approx(-pi / 3).epsilon(1e-14));
    CHECK(g[1].multiplicity() == 2);
    CHECK(principal_phase(g[1].mu) == doctest::Approx(pi / 3 + 5e-13).epsilon(1e-14));
    CHECK(g[1].raw_mus.size() == 2);
    CHECK(std::abs(std::abs(g[1].mu) - 1.0) <= 1e-15);
  }

  TEST_CASE("chains link through intermediate eigenvalues") {
    const auto g = group_eigenvalues(
        diagonal_decomposition({std::polar(1.0, 0.5), std::polar(1.0, 0.5 + 8e-9),
                                std::polar(1.0, 0.5 + 1.6e-8), std::polar(1.0, 2.0)}),
        1e-8);
    REQUIRE(g.size() == 2);
    CHECK(g[0].multiplicity() == 3);
  }

  TEST_CASE("eigenvalues straddling -1 merge across the branch cut") {
    const auto g = group_eigenvalues(
        diagonal_decomposition({std::polar(1.0, pi - 1e-9), std::polar(1.0, -pi + 1e-9), 1.0,
                                cplx(-1.0, 0.0)}),
        1e-8);
    REQUIRE(g.size() == 2);
    CHECK(g[1].multiplicity() == 3);
    CHECK(std::abs(g[1].mu + 1.0) <= 1e-15);
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS(group_eigenvalues(diagonal_decomposition({0.5, 1.0}), 1e-8), SpectrumError);
    CHECK_THROWS_WITH(group_eigenvalues(diagonal_decomposition({cplx(0.0, 0.5), 1.0}), 1e-8),
                      doctest::Contains("not from an orthogonal embedding"));
    CHECK_THROWS_AS(group_eigenvalues(EigenDecomposition{}, 1e-8), InputError);
    CHECK_THROWS_AS(group_eigenvalues(diagonal_decomposition({1.0}), 0.0), InputError);
  }
}

TEST_SUITE("project_l") {
  TEST_CASE("separates U and conj(U) eigenvectors") {
    const double h = 1.0 / std::numbers::sqrt2;
    const ComplexMatrix z_u(2, 1, {h, -I1 * h});
    CHECK(std::abs(project_l(z_u)(0, 0) - std::numbers::sqrt2) <= 1e-15);
    const ComplexMatrix z_ubar(2, 1, {h, I1 * h});
    CHECK(std::abs(project_l(z_ubar)(0, 0)) <= 1e-16);
  }

  TEST_CASE("annihilates W-") {
    const PlantedUnitary p = planted_unitary({{{0.4, 2}, {-1.3, 1}, {2.2, 2}}, 3});
    const KnownEigenbasis w = build_w(p.v, p.lambda);
    CHECK(max_abs(project_l(w.w.block(0, 5, 10, 5))) <= 1e-14);
  }

  TEST_CASE("odd row count is rejected") {
    CHECK_THROWS_AS(project_l(ComplexMatrix(3, 2)), DimensionError);
  }
}

TEST_SUITE("recover") {
  TEST_CASE("U = I2: one real group, rank is half the multiplicity") {
    const RealEmbedding m = embed(ComplexMatrix::identity(2));
    const RecoveryReport r = recover(real_normal_eig(m));
    REQUIRE(r.groups.size() == 1);
    CHECK(r.groups[0].m_m == 4);
    CHECK(r.groups[0].rank == 2);
    CHECK(r.groups[0].m_ubar == 2);
    CHECK(r.lambda == std::vector<cplx>{1.0, 1.0});
    CHECK(unitarity_residual(r.v) <= 1e-14);
  }

  TEST_CASE("U = [[i]]") {
    const ComplexMatrix u(1, 1, {I1});
    const RecoveryReport r = recover(real_normal_eig(embed(u)), {}, u);
    REQUIRE(r.groups.size() == 2);
    CHECK(std::abs(r.groups[0].mu + I1) <= 1e-15);
    CHECK(r.groups[0].rank == 0);
    CHECK(r.groups[0].m_ubar == 1);
    CHECK(std::abs(r.groups[1].mu - I1) <= 1e-15);
    CHECK(r.groups[1].rank == 1);
    REQUIRE(r.lambda.size() == 1);
    CHECK(std::abs(r.lambda[0] - I1) <= 1e-15);
    CHECK(std::abs(std::abs(r.v(0, 0)) - 1.0) <= 1e-15);
    CHECK(r.residual_decomp <= 1e-15);
  }

  TEST_CASE("planted n = 8 with scrambled eigenbasis") {
    const Pipeline p = run({{{pi / 3, 3}, {0.0, 2}, {2 * pi / 5, 1}, {-2 * pi / 5, 1}, {pi, 1}}, 99});
    const auto groups = group_eigenvalues(p.eig, kDefaultDeltaGroup);
    const EigenDecomposition scrambled = scramble_eigenbasis(p.eig, groups, 1e3, 5);
    const RecoveryReport r = recover(scrambled, {}, p.planted.u);

    const std::map<int, std::size_t> planted_rank = {{60, 3}, {0, 2}, {72, 1}, {-72, 1}, {180, 1},
                                                     {-60, 0}};
    std::vector<std::size_t> nonzero;
    for (const GroupRecord& g : r.groups) {
      const int degrees = static_cast<int>(std::lround(principal_phase(g.mu) * 180.0 / pi));
      REQUIRE(planted_rank.count(degrees) == 1);
      CHECK(g.rank == planted_rank.at(degrees));
      CHECK(g.rank + g.m_ubar == g.m_m);
      if (g.rank > 0) nonzero.push_back(g.rank);
    }
    std::sort(nonzero.rbegin(), nonzero.rend());
    CHECK(nonzero == std::vector<std::size_t>{3, 2, 1, 1, 1});
    CHECK(r.residual_decomp <= 1e-8 * 8);
    CHECK(r.residual_unitary <= 1e-8 * 8);
    CHECK(oracle::multiset_phase_distance(oracle::phases_of(r.lambda),
                                          oracle::normal_phases(p.planted.u)) <= 1e-8);
  }

  TEST_CASE("residuals against the rebuilt U match those against the true U") {
    const Pipeline p = run({{{0.3, 2}, {-2.0, 1}, {pi, 2}}, 12});
    const RecoveryReport with_u = recover(p.eig, {}, p.planted.u);
    const RecoveryReport rebuilt = recover(p.eig);
    CHECK(with_u.reference_supplied);
    CHECK_FALSE(rebuilt.reference_supplied);
    CHECK(rebuilt.residual_decomp <= 1e-12);
    CHECK(with_u.residual_decomp <= 1e-12);
    CHECK(max_abs(reconstruct_unitary(p.eig) - p.planted.u) <= 1e-13);
  }

  TEST_CASE("parallel and serial group processing give identical output") {
    const Pipeline p = run({{{1.0, 3}, {-1.0, 2}, {0.0, 2}, {2.5, 1}, {-2.5, 2}}, 21});
    RecoverOptions serial;
    serial.parallel = false;
    const RecoveryReport a = recover(p.eig);
    const RecoveryReport b = recover(p.eig, serial);
    CHECK(a.v == b.v);
    CHECK(a.lambda == b.lambda);
  }

  TEST_CASE("accounting failure carries the partial report") {
    const Pipeline p = run({{{0.5, 2}, {1.5, 1}}, 2});
    RecoverOptions opts;
    opts.tau_rank = 10.0;
    try {
      (void)recover(p.eig, opts);
      FAIL("expected RecoveryError");
    } catch (const RecoveryError& e) {
      CHECK(e.kind() == RecoveryError::Kind::accounting);
      CHECK(std::string(e.what()).find("multiplicity accounting failure") != std::string::npos);
      CHECK(e.report().total_rank() == 0);
      CHECK(e.report().groups.size() == 4);
    }
  }

  TEST_CASE("minimum group gap is reported") {
    const ComplexMatrix u = ComplexMatrix::diagonal(std::vector<cplx>{
        std::polar(1.0, 0.5), std::polar(1.0, 0.5 + 5e-8), std::polar(1.0, 2.0)});
    const RecoveryReport r = recover(real_normal_eig(embed(u)), {}, u);
    REQUIRE(r.groups.size() == 6);
    CHECK(r.min_group_gap == doctest::Approx(5e-8).epsilon(1e-3));
    CHECK(r.near_degenerate);
  }

  TEST_CASE("tau_rank must be nonnegative") {
    RecoverOptions opts;
    opts.tau_rank = -1.0;
    CHECK_THROWS_AS(recover(diagonal_decomposition({1.0, 1.0}), opts), InputError);
  }
}

TEST_SUITE("recover properties") {
  TEST_CASE("rank and span theorems on randomized conjugate-pair fixtures") {
    std::uint64_t seed = 700;
    for (std::size_t mu_count = 0; mu_count <= 3; ++mu_count) {
      for (std::size_t conj_count = 0; conj_count <= 3; ++conj_count) {
        if (mu_count + conj_count == 0) continue;
        const double theta = 0.4 + 0.3 * static_cast<double>(seed % 7);
        SpectrumSpec spec;
        spec.seed = ++seed;
        if (mu_count) spec.items.push_back({theta, mu_count});
        if (conj_count) spec.items.push_back({-theta, conj_count});
        spec.items.push_back({-2.95, 1});
        const Pipeline p = run(spec);
        const auto groups = group_eigenvalues(p.eig, kDefaultDeltaGroup);
        const RecoveryReport base = recover(p.eig, {}, p.planted.u);
        const RecoveryReport mixed =
            recover(scramble_eigenbasis(p.eig, groups, 1e3, seed), {}, p.planted.u);
        for (const RecoveryReport* r : {&base, &mixed}) {
          for (const GroupRecord& g : r->groups) {
            const double ph = principal_phase(g.mu);
            if (std::abs(ph - theta) < 1e-6) {
              CHECK(g.rank == mu_count);
              CHECK(g.m_m == mu_count + conj_count);
            } else if (std::abs(ph + theta) < 1e-6) {
              CHECK(g.rank == conj_count);
              CHECK(g.m_m == mu_count + conj_count);
            }
            if (g.rank > 0) {
              CHECK(largest_principal_angle(g.basis, planted_block(p.planted, g.mu)) <= 1e-8);
            }
          }
          CHECK(r->residual_unitary <= 1e-8 * static_cast<double>(spec.n()));
        }
        for (std::size_t k = 0; k < base.groups.size(); ++k) {
          CHECK(base.groups[k].rank == mixed.groups[k].rank);
          if (base.groups[k].rank > 0) {
            CHECK(largest_principal_angle(base.groups[k].basis, mixed.groups[k].basis) <= 1e-8);
          }
        }
      }
    }
  }
}

TEST_SUITE("verify") {
  TEST_CASE("identity triple passes with zero residuals") {
    const VerificationRecord v =
        verify(ComplexMatrix::identity(3), ComplexMatrix::identity(3), std::vector<cplx>(3, 1.0));
    CHECK(v.pass);
    CHECK(v.residual_decomp == 0.0);
    CHECK(v.residual_unitary == 0.0);
    CHECK(v.residual_reconstruction == 0.0);
    CHECK(v.checks.size() == 4);
  }

  TEST_CASE("a negated eigenvalue fails") {
    const PlantedUnitary p = planted_unitary({{{0.7, 2}, {-1.9, 2}}, 6});
    std::vector<cplx> lambda = p.lambda;
    lambda[2] = -lambda[2];
    const VerificationRecord v = verify(p.u, p.v, lambda);
    CHECK_FALSE(v.pass);
    CHECK(v.residual_decomp >= 0.5);
  }

  TEST_CASE("full pipeline on a Haar unitary") {
    const ComplexMatrix u = haar_unitary(12, 314);
    const RecoveryReport r = recover(real_normal_eig(embed(u)));
    const VerificationRecord v = verify(u, r);
    CHECK(v.pass);
    CHECK(v.residual_decomp <= 1e-8 * 12);
  }

  TEST_CASE("shape mismatch throws") {
    CHECK_THROWS_AS(verify(ComplexMatrix::identity(2), ComplexMatrix::identity(3),
                           std::vector<cplx>(3, 1.0)),
                    DimensionError);
  }
}

TEST_SUITE("unitary_log") {
  TEST_CASE("identity gives zero") {
    const UnitaryLog l = unitary_log(ComplexMatrix::identity(3), std::vector<cplx>(3, 1.0));
    CHECK(max_abs(l.h) == 0.0);
    CHECK_FALSE(l.branch_boundary);
  }

  TEST_CASE("[[i]] gives pi/2") {
    const ComplexMatrix u(1, 1, {I1});
    const UnitaryLog l = unitary_log(recover(real_normal_eig(embed(u))));
    CHECK(std::abs(l.h(0, 0) - pi / 2) <= 1e-15);
  }

  TEST_CASE("diagonal phases") {
    const std::vector<cplx> lambda = {std::polar(1.0, 0.3), std::polar(1.0, -1.1)};
    const ComplexMatrix u = ComplexMatrix::diagonal(lambda);
    const RecoveryReport r = recover(real_normal_eig(embed(u)), {}, u);
    const UnitaryLog l = unitary_log(r);
    const ComplexMatrix expected = ComplexMatrix::diagonal(std::vector<cplx>{0.3, -1.1});
    CHECK(max_abs(l.h - expected) <= 1e-12);
    CHECK(max_abs(exp_i_from_eigenpairs(r.v, l.thetas) - u) <= 1e-12);
  }

  TEST_CASE("branch boundary at -1") {
    const UnitaryLog l = unitary_log(ComplexMatrix::identity(2), {cplx(-1.0, 1e-17), 1.0});
    CHECK(l.branch_boundary);
    CHECK(l.thetas[0] == pi);
  }

  TEST_CASE("Hermitian generator reproduces U") {
    const PlantedUnitary p = planted_unitary({{{2.0, 2}, {-0.6, 1}, {0.1, 3}, {-3.0, 1}}, 77});
    const RecoveryReport r = recover(real_normal_eig(embed(p.u)), {}, p.u);
    const UnitaryLog l = unitary_log(r);
    CHECK(l.hermiticity_residual <= 1e-10 * 7);
    CHECK(frobenius_norm(exp_i_from_eigenpairs(r.v, l.thetas) - p.u) <= 1e-9 * 7);
  }
}

TEST_SUITE("recover near the real axis") {
  TEST_CASE("phases close to +1 and -1 keep exact ranks and spans") {
    for (double d : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5}) {
      for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        CAPTURE(d);
        CAPTURE(seed);
        const SpectrumSpec spec{{{0.0, 3}, {d, 2}, {-d, 1}, {pi, 2}, {pi - d, 1}, {1.3, 1}}, seed};
        const PlantedUnitary p = planted_unitary(spec);
        const RecoveryReport r = recover(real_normal_eig(embed(p.u)), {}, p.u);
        CHECK(r.total_rank() == spec.n());
        for (const GroupRecord& g : r.groups) {
          const ComplexMatrix truth = planted_block(p, g.mu);
          CHECK(g.rank == truth.cols());
          if (g.rank > 0 && g.rank == truth.cols()) {
            CHECK(largest_principal_angle(g.basis, truth) <= 1e-8);
          }
        }
      }
    }
  }
}
