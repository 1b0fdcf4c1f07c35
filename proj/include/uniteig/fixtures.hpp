#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <random>
#include <string>
#include <vector>

#include "uniteig/matrix.hpp"
#include "uniteig/realeig.hpp"
#include "uniteig/recover.hpp"

namespace uniteig {

/// Seedable stream of uniform and normal deviates.
///
/// Bits come from std::mt19937_64 (whose output sequence is fixed by the C++
/// standard). Uniforms take the top 53 bits, u = (k + 0.5) / 2^53, so they
/// lie strictly inside (0, 1). Normals use the Box-Muller transform, both
/// outputs of a pair being consumed in order. Nothing here depends on the
/// unspecified std:: distribution classes, so a given seed yields the same
/// stream with every standard library.
class DeviateStream {
 public:
  explicit DeviateStream(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  cplx complex_normal();  ///< (g1 + i g2) / sqrt(2), unit variance

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct SpectrumItem {
  double theta = 0.0;  ///< radians
  std::size_t multiplicity = 1;
};

/// Prescribed spectrum of a planted unitary: eigenvalue exp(i theta) with the
/// given multiplicity, for each item.
struct SpectrumSpec {
  std::vector<SpectrumItem> items;
  std::uint64_t seed = 0;

  std::size_t n() const noexcept;
};

/// Parses "theta_radians multiplicity" lines; '#' starts a comment. Throws
/// FormatError with the offending line number.
SpectrumSpec parse_spectrum_spec(std::istream& in, std::uint64_t seed);
SpectrumSpec load_spectrum_spec(const std::string& path, std::uint64_t seed);

/// Checks multiplicities >= 1, n >= 1 and that distinct phases are more than
/// 10 delta_group apart on the circle. Throws InputError.
void validate(const SpectrumSpec& spec, double delta_group = kDefaultDeltaGroup);

/// Haar-distributed unitary: Q of the phase-fixed QR of a complex Gaussian matrix.
ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed);

struct PlantedUnitary {
  ComplexMatrix u;
  ComplexMatrix v;  ///< ground-truth eigenbasis
  std::vector<cplx> lambda;
  std::vector<double> thetas;  ///< phases as listed in the spec, one per column of v
};

/// U = V diag(exp(i theta)) V^H with V = haar_unitary(n, spec.seed).
PlantedUnitary planted_unitary(const SpectrumSpec& spec, double delta_group = kDefaultDeltaGroup);

/// Right-multiplies every group block Z_mu by a random invertible matrix
/// Q1 diag(s) Q2, Q1 and Q2 Haar, s log-uniform in [cond^-1/2, cond^1/2],
/// so that the mixing condition number never exceeds cond_bound. Sigma is
/// carried over unchanged.
EigenDecomposition scramble_eigenbasis(const EigenDecomposition& e,
                                       const std::vector<EigenGroup>& groups, double cond_bound,
                                       std::uint64_t seed);

/// The degeneracy taxonomy every pipeline test must cover:
/// repeated non-real eigenvalue, real eigenvalues +1 and -1, a conjugate pair
/// with unequal multiplicities, and a mixture of all three.
struct NamedSpectrum {
  std::string name;
  SpectrumSpec spec;
};

std::vector<NamedSpectrum> degeneracy_taxonomy(std::uint64_t seed);

}  // namespace uniteig
