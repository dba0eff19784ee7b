#pragma once

#include <vector>

namespace eddy {

/// First-kind Bessel function of order one.
double bessel_j1(double x);

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// 20-point rule, the panel rule used throughout.
const GaussRule& gauss_legendre_20();

/// Integrate f over [a, b] with `panels` equal panels of the 20-point rule.
template <class F>
double integrate_panels(F&& f, double a, double b, int panels) {
  const GaussRule& rule = gauss_legendre_20();
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + width * p;
    const double half = 0.5 * width;
    const double mid = lo + half;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    total += half * acc;
  }
  return total;
}

} // namespace eddy
