#include "qss/quadrature.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qss::quadrature {
namespace {
using Rule = boost::math::quadrature::gauss<double, 64>;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  return Rule::integrate(f, a, b);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) {
    return 0.0;
  }
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

double average_over_k(const std::function<double(double)>& f) { return gauss_legendre(f, 0.0, 1.0); }

const std::vector<Node>& unit_interval_nodes() {
  static const std::vector<Node> nodes = [] {
    std::vector<Node> out;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    // Boost stores the non-negative half of a symmetric rule.
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.push_back({0.5 + 0.5 * x[i], 0.5 * w[i]});
      if (x[i] != 0.0) {
        out.push_back({0.5 - 0.5 * x[i], 0.5 * w[i]});
      }
    }
    std::sort(out.begin(), out.end(), [](const Node& a, const Node& b) { return a.x < b.x; });
    return out;
  }();
  return nodes;
}

}  // namespace qss::quadrature
