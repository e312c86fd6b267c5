#pragma once

#include <functional>
#include <vector>

namespace greencolloc {

/// Gauss-Legendre rule on [-1, 1]. Weights sum to 2; exact for
/// polynomials of degree <= 2q - 1.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Returns the q-point Gauss-Legendre rule, 1 <= q <= 64. Rules are
/// computed once and cached.
const QuadRule& gauss_rule(int q);

/// Composite Gauss quadrature of g over [a, b], partitioned at every
/// split point that falls strictly inside (a, b). Empty segments are
/// skipped. A non-finite evaluation of g throws std::runtime_error
/// naming the offending abscissa.
double integrate_split(const std::function<double(double)>& g, double a,
                       double b, std::vector<double> splits, int q = 20);

}  // namespace greencolloc
