#pragma once

#include <functional>
#include <vector>

namespace qss::quadrature {

/// 64-node Gauss-Legendre on [a, b]. Exact for polynomials of degree <= 127.
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

/// Adaptive Gauss-Kronrod with interval bisection, for integrands that are
/// only piecewise smooth or have endpoint square-root behaviour.
double adaptive(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// Integral over k in [0,1] with the Gauss-Legendre rule.
double average_over_k(const std::function<double(double)>& f);

/// The nodes/weights of the rule mapped to [0,1]; weights sum to 1.
struct Node {
  double x;
  double weight;
};
const std::vector<Node>& unit_interval_nodes();

}  // namespace qss::quadrature
