#include "eddy/special.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <numeric>

namespace eddy {

double bessel_j1(double x) {
  return boost::math::cyl_bessel_j(1, x);
}

namespace {

template <unsigned N>
GaussRule build_rule() {
  using Boost = boost::math::quadrature::gauss<double, N>;
  const auto& x = Boost::abscissa();
  const auto& w = Boost::weights();
  GaussRule rule;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      rule.nodes.push_back(0.0);
      rule.weights.push_back(w[i]);
    } else {
      rule.nodes.push_back(-x[i]);
      rule.weights.push_back(w[i]);
      rule.nodes.push_back(x[i]);
      rule.weights.push_back(w[i]);
    }
  }
  // Ascending node order keeps summation order reproducible and readable.
  std::vector<std::size_t> order(rule.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
  GaussRule sorted;
  for (std::size_t i : order) {
    sorted.nodes.push_back(rule.nodes[i]);
    sorted.weights.push_back(rule.weights[i]);
  }
  return sorted;
}

} // namespace

const GaussRule& gauss_legendre_20() {
  static const GaussRule rule = build_rule<20>();
  return rule;
}

} // namespace eddy
