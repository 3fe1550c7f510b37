#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geomreach {

// Shapes of vectors, subspaces or maps do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A quantitative hypothesis of a statement is not met by the input, e.g.
// eps/R above 1/2 or a polyline longer than 2*pi*R.
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Projection to the tangent space is not injective on a patch.
class InjectivityError : public std::runtime_error {
 public:
  InjectivityError(std::size_t i, std::size_t j)
      : std::runtime_error("reach hypothesis violated at pair (" + std::to_string(i) + "," +
                           std::to_string(j) + ")"),
        first(i),
        second(j) {}
  std::size_t first;
  std::size_t second;
};

// A ball used by the local reach estimator holds too few samples.
class SparseBallError : public std::runtime_error {
 public:
  SparseBallError(const std::string& what, double min_rho)
      : std::runtime_error(what), min_usable_rho(min_rho) {}
  double min_usable_rho;
};

}  // namespace geomreach
