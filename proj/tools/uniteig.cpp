// uniteig: file-based front end for the embedding / eigensolve / recovery pipeline.
//
// Exit codes: 0 ok, 1 verification failed, 2 bad input (format, dimension,
// structure, usage), 3 eigensolver did not converge, 4 recovery failed
// (spectrum not from an orthogonal embedding, or rank accounting).

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "uniteig/embedding.hpp"
#include "uniteig/errors.hpp"
#include "uniteig/fixtures.hpp"
#include "uniteig/matcore.hpp"
#include "uniteig/matrix_market.hpp"
#include "uniteig/realeig.hpp"
#include "uniteig/recover.hpp"
#include "uniteig/report.hpp"
#include "uniteig/unit_circle.hpp"

namespace {

using namespace uniteig;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitRecovery = 4;

std::uint64_t default_seed() {
  const char* env = std::getenv("UNITEIG_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw InputError(std::string("UNITEIG_SEED is not an integer: '") + env + "'");
  return v;
}

struct GenArgs {
  std::string spec;
  std::optional<std::uint64_t> seed;
  double delta_group = kDefaultDeltaGroup;
  std::string out_u, out_v, out_lambda;
};

int cmd_gen(const GenArgs& a) {
  const SpectrumSpec spec = load_spectrum_spec(a.spec, a.seed ? *a.seed : default_seed());
  const PlantedUnitary p = planted_unitary(spec, a.delta_group);
  save_matrix(a.out_u, p.u);
  if (!a.out_v.empty()) save_matrix(a.out_v, p.v);
  if (!a.out_lambda.empty()) save_vector(a.out_lambda, p.lambda);
  std::printf("n %zu  seed %llu  unitarity_residual %.3e\n", spec.n(),
              static_cast<unsigned long long>(spec.seed), unitarity_residual(p.u));
  return kExitOk;
}

struct EmbedArgs {
  std::string in, out;
  double tolerance = kIngestStructureTolerance;
};

int cmd_embed(const EmbedArgs& a) {
  save_matrix(a.out, embed(load_complex_matrix(a.in)).matrix());
  return kExitOk;
}

int cmd_extract(const EmbedArgs& a) {
  save_matrix(a.out, extract(load_real_matrix(a.in), a.tolerance));
  return kExitOk;
}

struct EigenArgs {
  std::string in_m, out_z, out_sigma;
  double tolerance = kIngestStructureTolerance;
};

int cmd_eigen(const EigenArgs& a) {
  const RealEmbedding m = RealEmbedding::from_matrix(load_real_matrix(a.in_m), a.tolerance);
  const EigenDecomposition e = real_normal_eig(m);
  save_matrix(a.out_z, e.z);
  save_vector(a.out_sigma, e.sigma);
  std::printf("eig_residual %.3e\n", eig_residual(m, e));
  return kExitOk;
}

struct RecoverArgs {
  std::string in_z, in_sigma, in_u;
  double delta_group = kDefaultDeltaGroup;
  std::optional<double> tau_rank;
  bool serial = false;
  std::string out_v, out_lambda, report;
};

void print_groups(const RecoveryReport& r) {
  std::printf("%-10s %-10s %5s %5s %6s\n", "mu_phase", "spread", "m_M", "rank", "m_Ubar");
  for (const GroupRecord& g : r.groups) {
    std::printf("%+10.6f %10.3e %5zu %5zu %6zu\n", principal_phase(g.mu),
                std::abs(g.raw_mean - g.mu), g.m_m, g.rank, g.m_ubar);
  }
}

int cmd_recover(const RecoverArgs& a) {
  InputPaths inputs{{"z", a.in_z}, {"sigma", a.in_sigma}};
  if (!a.in_u.empty()) inputs["u"] = a.in_u;

  EigenDecomposition e{load_complex_matrix(a.in_z), load_complex_vector(a.in_sigma)};
  std::optional<ComplexMatrix> u;
  if (!a.in_u.empty()) u = load_complex_matrix(a.in_u);

  RecoverOptions opts;
  opts.delta_group = a.delta_group;
  opts.tau_rank = a.tau_rank;
  opts.parallel = !a.serial;

  const auto fail = [&](const RecoveryReport& partial, const std::string& message) {
    if (!a.report.empty()) write_json(a.report, recovery_report_json(partial, inputs, false, message));
    print_groups(partial);
    std::cerr << "uniteig recover: " << message << '\n';
    return kExitRecovery;
  };

  RecoveryReport r;
  try {
    r = u ? recover(e, opts, *u) : recover(e, opts);
  } catch (const RecoveryError& err) {
    return fail(err.report(), err.what());
  } catch (const SpectrumError& err) {
    RecoveryReport empty;
    empty.delta_group = opts.delta_group;
    empty.tau_rank = opts.tau_rank;
    return fail(empty, err.what());
  }

  save_matrix(a.out_v, r.v);
  save_vector(a.out_lambda, r.lambda);
  if (!a.report.empty()) write_json(a.report, recovery_report_json(r, inputs, true));
  print_groups(r);
  std::printf("residual_decomp %.3e (%s)  residual_unitary %.3e\n", r.residual_decomp,
              r.reference_supplied ? "input U" : "rebuilt U", r.residual_unitary);
  if (r.near_degenerate) {
    std::fprintf(stderr, "warning: groups only %.3e apart; results are tolerance sensitive\n",
                 r.min_group_gap);
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string in_u, in_v, in_lambda, report;
};

int cmd_verify(const VerifyArgs& a) {
  const VerificationRecord rec = verify(load_complex_matrix(a.in_u), load_complex_matrix(a.in_v),
                                        load_complex_vector(a.in_lambda));
  if (!a.report.empty()) {
    write_json(a.report, verification_json(rec, {{"u", a.in_u}, {"v", a.in_v}, {"lambda", a.in_lambda}}));
  }
  for (const Check& c : rec.checks) {
    std::printf("%-4s %-24s %.3e (threshold %.3e)\n", c.passed ? "ok" : "FAIL", c.name.c_str(),
                c.value, c.threshold);
  }
  std::printf("%s\n", rec.pass ? "pass" : "fail");
  return rec.pass ? kExitOk : kExitVerifyFailed;
}

struct LogmArgs {
  std::string in_v, in_lambda, out_h;
};

int cmd_logm(const LogmArgs& a) {
  const UnitaryLog l = unitary_log(load_complex_matrix(a.in_v), load_complex_vector(a.in_lambda));
  save_matrix(a.out_h, l.h);
  if (l.branch_boundary) {
    std::fprintf(stderr,
                 "warning: branch boundary: eigenvalue at -1, the principal log takes theta = pi\n");
  }
  std::printf("hermiticity_residual %.3e\n", l.hermiticity_residual);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unitary eigendecomposition from the real block embedding"};
  app.set_version_flag("--version", std::string(uniteig::version()));
  app.require_subcommand(1);

  std::function<int()> run;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Planted unitary from a spectrum spec file");
  g->add_option("spec", gen.spec, "Lines of 'theta_radians multiplicity'; '#' comments")
      ->required()
      ->check(CLI::ExistingFile);
  g->add_option("--seed", gen.seed, "Generator seed (default: $UNITEIG_SEED, else 0)");
  g->add_option("--delta-group", gen.delta_group, "Distinct phases must differ by > 10x this")
      ->capture_default_str();
  g->add_option("--out-u", gen.out_u)->required();
  g->add_option("--out-v", gen.out_v);
  g->add_option("--out-lambda", gen.out_lambda);
  g->callback([&] { run = [&] { return cmd_gen(gen); }; });

  EmbedArgs emb;
  auto* e = app.add_subcommand("embed", "Complex U to real M = [[A, -B], [B, A]]");
  e->add_option("--in-u", emb.in)->required();
  e->add_option("--out-m", emb.out)->required();
  e->callback([&] { run = [&] { return cmd_embed(emb); }; });

  EmbedArgs ext;
  auto* x = app.add_subcommand("extract", "Real M back to complex U");
  x->add_option("--in-m", ext.in)->required();
  x->add_option("--out-u", ext.out)->required();
  x->add_option("--structure-tol", ext.tolerance, "Relative block-structure tolerance")
      ->capture_default_str();
  x->callback([&] { run = [&] { return cmd_extract(ext); }; });

  EigenArgs eig;
  auto* ei = app.add_subcommand("eigen", "Reference eigensolver for an orthogonal embedding");
  ei->add_option("--in-m", eig.in_m)->required();
  ei->add_option("--out-z", eig.out_z)->required();
  ei->add_option("--out-sigma", eig.out_sigma)->required();
  ei->add_option("--structure-tol", eig.tolerance, "Relative block-structure tolerance")
      ->capture_default_str();
  ei->callback([&] { run = [&] { return cmd_eigen(eig); }; });

  RecoverArgs rec;
  auto* r = app.add_subcommand("recover", "V and Lambda of U from (Z, Sigma) of its embedding");
  r->add_option("--in-z", rec.in_z)->required();
  r->add_option("--in-sigma", rec.in_sigma)->required();
  r->add_option("--in-u", rec.in_u, "Measure residuals against this U instead of the rebuilt one");
  r->add_option("--delta-group", rec.delta_group, "Phase gap that links eigenvalues into a group")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  r->add_option("--tau-rank", rec.tau_rank,
                "Absolute rank threshold (default: max(n, m_M) * ||Z_mu||_2 * 1e-12 per group)")
      ->check(CLI::NonNegativeNumber);
  r->add_flag("--serial", rec.serial, "Process groups one at a time");
  r->add_option("--out-v", rec.out_v)->required();
  r->add_option("--out-lambda", rec.out_lambda)->required();
  r->add_option("--report", rec.report, "JSON report, written on failure too");
  r->callback([&] { run = [&] { return cmd_recover(rec); }; });

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Check U V = V diag(Lambda) and unitarity of V");
  v->add_option("--in-u", ver.in_u)->required();
  v->add_option("--in-v", ver.in_v)->required();
  v->add_option("--in-lambda", ver.in_lambda)->required();
  v->add_option("--report", ver.report);
  v->callback([&] { run = [&] { return cmd_verify(ver); }; });

  LogmArgs lg;
  auto* l = app.add_subcommand("logm", "Hermitian H with U = exp(iH), principal branch");
  l->add_option("--in-v", lg.in_v)->required();
  l->add_option("--in-lambda", lg.in_lambda)->required();
  l->add_option("--out-h", lg.out_h)->required();
  l->callback([&] { run = [&] { return cmd_logm(lg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    return run();
  } catch (const uniteig::ConvergenceError& err) {
    std::cerr << "uniteig: " << err.what() << '\n';
    return kExitConvergence;
  } catch (const uniteig::SpectrumError& err) {
    std::cerr << "uniteig: " << err.what() << '\n';
    return kExitRecovery;
  } catch (const uniteig::InputError& err) {
    std::cerr << "uniteig: " << err.what() << '\n';
    return kExitInput;
  } catch (const uniteig::DimensionError& err) {
    std::cerr << "uniteig: " << err.what() << '\n';
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "uniteig: internal error: " << err.what() << '\n';
    return 1;
  }
}
