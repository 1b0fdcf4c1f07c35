#include "uniteig/fixtures.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "uniteig/matcore.hpp"
#include "uniteig/unit_circle.hpp"

namespace uniteig {

double DeviateStream::uniform() {
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double DeviateStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

cplx DeviateStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return cplx(re, im) / std::numbers::sqrt2;
}

std::size_t SpectrumSpec::n() const noexcept {
  std::size_t total = 0;
  for (const SpectrumItem& it : items) total += it.multiplicity;
  return total;
}

SpectrumSpec parse_spectrum_spec(std::istream& in, std::uint64_t seed) {
  SpectrumSpec spec;
  spec.seed = seed;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string theta_tok;
    if (!(ls >> theta_tok)) continue;
    std::string mult_tok;
    std::string extra;
    const auto fail = [&](const std::string& why) {
      throw FormatError("spectrum spec line " + std::to_string(lineno) + ": " + why + " in '" +
                        line + "'");
    };
    if (!(ls >> mult_tok)) fail("expected 'theta_radians multiplicity'");
    if (ls >> extra) fail("trailing token '" + extra + "'");
    std::size_t used = 0;
    double theta = 0.0;
    long long mult = 0;
    try {
      theta = std::stod(theta_tok, &used);
      if (used != theta_tok.size()) fail("bad phase '" + theta_tok + "'");
      mult = std::stoll(mult_tok, &used);
      if (used != mult_tok.size()) fail("bad multiplicity '" + mult_tok + "'");
    } catch (const std::logic_error&) {
      fail("unparseable number");
    }
    if (!std::isfinite(theta)) fail("phase must be finite");
    if (mult < 1) fail("multiplicity must be >= 1");
    spec.items.push_back({theta, static_cast<std::size_t>(mult)});
  }
  return spec;
}

SpectrumSpec load_spectrum_spec(const std::string& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open spectrum spec '" + path + "'");
  return parse_spectrum_spec(in, seed);
}

void validate(const SpectrumSpec& spec, double delta_group) {
  if (spec.items.empty()) throw InputError("spectrum spec has no items");
  for (const SpectrumItem& it : spec.items) {
    if (it.multiplicity < 1) throw InputError("spectrum spec multiplicities must be >= 1");
    if (!std::isfinite(it.theta)) throw InputError("spectrum spec phases must be finite");
  }
  const double min_gap = 10.0 * delta_group;
  for (std::size_t a = 0; a < spec.items.size(); ++a) {
    for (std::size_t b = a + 1; b < spec.items.size(); ++b) {
      const double d = angle_distance(spec.items[a].theta, spec.items[b].theta);
      if (d > 0.0 && d <= min_gap) {
        std::ostringstream os;
        os << "spectrum spec phases " << spec.items[a].theta << " and " << spec.items[b].theta
           << " are " << d << " apart; distinct phases must differ by more than " << min_gap;
        throw InputError(os.str());
      }
    }
  }
}

ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InputError("haar_unitary needs n >= 1");
  DeviateStream stream(seed);
  ComplexMatrix g(n, n);
  for (cplx& x : g.data()) x = stream.complex_normal();
  return householder_qr(g).q;
}

PlantedUnitary planted_unitary(const SpectrumSpec& spec, double delta_group) {
  validate(spec, delta_group);
  const std::size_t n = spec.n();
  PlantedUnitary out;
  out.v = haar_unitary(n, spec.seed);
  for (const SpectrumItem& it : spec.items) {
    for (std::size_t k = 0; k < it.multiplicity; ++k) {
      out.thetas.push_back(it.theta);
      out.lambda.push_back(std::polar(1.0, it.theta));
    }
  }
  ComplexMatrix v_lambda = out.v;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v_lambda(i, j) *= out.lambda[j];
  out.u = gemm(v_lambda, adjoint(out.v));
  return out;
}

EigenDecomposition scramble_eigenbasis(const EigenDecomposition& e,
                                       const std::vector<EigenGroup>& groups, double cond_bound,
                                       std::uint64_t seed) {
  if (!(cond_bound >= 1.0)) throw InputError("scramble_eigenbasis: cond_bound must be >= 1");
  std::vector<int> seen(e.dim(), 0);
  for (const EigenGroup& g : groups)
    for (std::size_t k : g.indices) {
      if (k >= e.dim()) throw InputError("scramble_eigenbasis: group column out of range");
      ++seen[k];
    }
  for (int s : seen) {
    if (s != 1) throw InputError("scramble_eigenbasis: groups must partition the columns of Z");
  }

  const std::uint64_t mix = seed ^ 0x9e3779b97f4a7c15ULL;
  DeviateStream stream(mix);
  const double log_cond = std::log(cond_bound);
  EigenDecomposition out = e;
  for (const EigenGroup& g : groups) {
    const std::size_t m = g.indices.size();
    const std::uint64_t seed_left = static_cast<std::uint64_t>(stream.uniform() * 0x1.0p53);
    const std::uint64_t seed_right = static_cast<std::uint64_t>(stream.uniform() * 0x1.0p53);
    ComplexMatrix left = haar_unitary(m, seed_left);
    const ComplexMatrix right = haar_unitary(m, seed_right);
    for (std::size_t j = 0; j < m; ++j) {
      const double s = std::exp((stream.uniform() - 0.5) * log_cond);
      for (std::size_t i = 0; i < m; ++i) left(i, j) *= s;
    }
    const ComplexMatrix mixed = gemm(e.z.columns(g.indices), gemm(left, right));
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < e.dim(); ++i) out.z(i, g.indices[k]) = mixed(i, k);
  }
  return out;
}

std::vector<NamedSpectrum> degeneracy_taxonomy(std::uint64_t seed) {
  constexpr double pi = std::numbers::pi;
  std::vector<NamedSpectrum> out;
  out.push_back({"repeated_nonreal", {{{pi / 3, 3}, {1.1, 1}, {-0.4, 2}}, seed}});
  out.push_back({"real_plus_minus_one", {{{0.0, 2}, {pi, 3}, {0.7, 1}}, seed + 1}});
  out.push_back({"conjugate_pair_asymmetric", {{{2 * pi / 5, 3}, {-2 * pi / 5, 1}, {1.9, 1}}, seed + 2}});
  out.push_back({"mixed",
                 {{{pi / 3, 3}, {-pi / 3, 1}, {0.0, 2}, {2 * pi / 5, 1}, {-2 * pi / 5, 1}, {pi, 1}},
                  seed + 3}});
  return out;
}

}  // namespace uniteig
