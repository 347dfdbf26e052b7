#pragma once

#include <array>
#include <cmath>
#include <random>

#include "ddm/tensor.hpp"

namespace ddm::testing {

using Dense3 = std::array<std::array<double, 3>, 3>;

/// Full 3x3 tensor from components (xx, yy, zz, tensor xy).
inline Dense3 dense(double xx, double yy, double zz, double xy)
{
  return {{{xx, xy, 0.0}, {xy, yy, 0.0}, {0.0, 0.0, zz}}};
}

inline double frobenius(const Dense3& a)
{
  double s = 0.0;
  for (const auto& row : a) {
    for (double v : row) s += v * v;
  }
  return std::sqrt(s);
}

inline SymTensor randomTensor(std::mt19937_64& rng, double scale)
{
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng)};
}

inline SymTensor randomPlaneStrain(std::mt19937_64& rng, double scale)
{
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), 0.0, u(rng)};
}

inline double relDiff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double maxRel(const Mat4& a, const Mat4& b)
{
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace ddm::testing
