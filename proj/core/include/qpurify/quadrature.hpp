#pragma once

#include <vector>

namespace qpurify {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// n equally spaced nodes on [0, 2pi) with weights 1/n; exact for the
/// average of trigonometric polynomials of degree < n.
QuadratureRule uniform_circle(int n);

}  // namespace qpurify
