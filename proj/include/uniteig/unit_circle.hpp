#pragma once

#include <cmath>
#include <numbers>

#include "uniteig/matrix.hpp"

namespace uniteig {

/// Argument of z in (-pi, pi].
inline double principal_phase(const cplx& z) {
  const double a = std::arg(z);
  return a <= -std::numbers::pi ? std::numbers::pi : a;
}

/// Distance between two phases measured along the unit circle, in [0, pi].
inline double angle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return d > std::numbers::pi ? 2.0 * std::numbers::pi - d : d;
}

inline double angle_distance(const cplx& a, const cplx& b) {
  return angle_distance(principal_phase(a), principal_phase(b));
}

}  // namespace uniteig
