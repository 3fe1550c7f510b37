#pragma once

#include <cmath>
#include <random>

#include "geomreach/linalg.hpp"

namespace testsupport {

inline geomreach::Matrix gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n;
  geomreach::Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

inline geomreach::Vector vec(std::initializer_list<double> xs) {
  geomreach::Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

inline geomreach::Subspace line2(double theta) {
  geomreach::Matrix b(2, 1);
  b << std::cos(theta), std::sin(theta);
  return geomreach::Subspace::span(b);
}

}  // namespace testsupport
