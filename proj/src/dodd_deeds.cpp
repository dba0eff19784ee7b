#include "eddy/dodd_deeds.hpp"

#include "eddy/errors.hpp"
#include "eddy/simd/slab_kernels.hpp"
#include "eddy/special.hpp"
#include "eddy/te_layered.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace eddy::dd {

std::string_view to_string(QuadratureRule rule) {
  return rule == QuadratureRule::adaptive ? "adaptive" : "gauss_legendre";
}

QuadratureRule quadrature_rule_from_string(std::string_view name) {
  if (name == "adaptive") return QuadratureRule::adaptive;
  if (name == "gauss_legendre" || name == "fixed") return QuadratureRule::gauss_legendre;
  throw InvalidInput("unknown quadrature rule '" + std::string(name) +
                     "' (expected adaptive or gauss_legendre)");
}

void QuadratureSpec::validate() const {
  if (!(alpha_max > 0.0) || !std::isfinite(alpha_max)) {
    throw InvalidInput("quadrature: alpha_max must be > 0");
  }
  if (n_panels < 8) {
    throw InvalidInput("quadrature: n_panels must be >= 8");
  }
  if (!(rel_tolerance > 0.0 && rel_tolerance < 1.0)) {
    throw InvalidInput("quadrature: rel_tolerance must lie in (0, 1)");
  }
}

QuadratureSpec default_quadrature(const CoilPair& coil) {
  coil.validate();
  QuadratureSpec q;
  q.alpha_max = 40.0 / std::min(coil.liftoff, coil.inner_radius);
  return q;
}

double radial_integral(const CoilPair& coil, double alpha) {
  const double lo = alpha * coil.inner_radius;
  const double hi = alpha * coil.outer_radius;
  // x J1(x) is smooth; one 20-point panel per ~2 units of x is plenty.
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / 2.0)));
  return integrate_panels([](double x) { return x * bessel_j1(x); }, lo, hi, panels);
}

namespace {

// e^{-a z1} - e^{-a z2} for z2 > z1, without cancellation at small a
double exp_window(double alpha, double z1, double z2) {
  return -std::exp(-alpha * z1) * std::expm1(-alpha * (z2 - z1));
}

} // namespace

double axial_factor(const CoilPair& coil, double alpha) {
  return exp_window(alpha, coil.lower_bottom(), coil.lower_top()) *
         exp_window(alpha, coil.upper_bottom(), coil.upper_top());
}

double air_axial_factor(const CoilPair& coil, double alpha) {
  const double rise = -std::expm1(-alpha * coil.coil_height);
  return std::exp(-alpha * coil.gap) * rise * rise;
}

double kernel_prefactor(const CoilPair& coil) {
  const double width = coil.outer_radius - coil.inner_radius;
  return std::numbers::pi * kMu0 * coil.turns_tx * coil.turns_rx /
         (width * width * coil.coil_height * coil.coil_height);
}

CoilKernel coil_kernel(const CoilPair& coil, double alpha) {
  coil.validate();
  if (!(alpha > 0.0)) {
    throw InvalidInput("coil_kernel: alpha must be > 0");
  }
  return {radial_integral(coil, alpha), axial_factor(coil, alpha), kernel_prefactor(coil)};
}

KernelTable build_kernel_table(const CoilPair& coil, double alpha_max, int n_panels) {
  const GaussRule& rule = gauss_legendre_20();
  const double c = kernel_prefactor(coil);
  KernelTable t;
  t.n_panels = n_panels;
  t.alpha_max = alpha_max;
  const std::size_t n = static_cast<std::size_t>(n_panels + kGradedPanels) * rule.nodes.size();
  t.alpha.reserve(n);
  t.weight.reserve(n);

  // The first uniform panel is split geometrically towards alpha = 0: thin,
  // weakly coupled plates have a reflection pole at alpha ~ -w mu0 sigma D / 2,
  // which sits arbitrarily close to the origin at low frequency.
  const double width = alpha_max / n_panels;
  std::vector<std::pair<double, double>> panels;
  panels.reserve(static_cast<std::size_t>(n_panels + kGradedPanels));
  double edge = width;
  for (int k = 0; k < kGradedPanels; ++k) edge *= 0.5;
  panels.emplace_back(0.0, edge);
  for (int k = 0; k < kGradedPanels; ++k, edge *= 2.0) panels.emplace_back(edge, 2.0 * edge);
  for (int p = 1; p < n_panels; ++p) panels.emplace_back(width * p, width * (p + 1));

  double air = 0.0;
  double body = 0.0;
  for (const auto& [lo, hi] : panels) {
    const double half = 0.5 * (hi - lo);
    const double mid = lo + half;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double a = mid + half * rule.nodes[i];
      const double pa = radial_integral(coil, a) / (a * a * a);
      const double radial = c * pa * pa * half * rule.weights[i];
      const double w = radial * axial_factor(coil, a);
      t.alpha.push_back(a);
      t.weight.push_back(w);
      air += radial * air_axial_factor(coil, a);
      body += std::abs(w);
    }
  }
  t.air_inductance = air;

  auto abs_kernel = [&](double a) {
    const double pa = radial_integral(coil, a) / (a * a * a);
    return c * pa * pa * axial_factor(coil, a);
  };
  const double tail =
      integrate_panels(abs_kernel, alpha_max, 2.0 * alpha_max, std::max(8, n_panels / 4));
  t.tail_ratio = body > 0.0 ? std::abs(tail) / body : 0.0;
  return t;
}

Solver::Solver(CoilPair coil, QuadratureSpec quad) : coil_(coil), quad_(quad) {
  coil_.validate();
  quad_.validate();
}

const KernelTable& Solver::table(int level) const {
  std::lock_guard<std::mutex> lock(mutex_);
  while (static_cast<int>(levels_.size()) <= level) {
    const int panels = quad_.n_panels << levels_.size();
    levels_.push_back(
        std::make_unique<const KernelTable>(build_kernel_table(coil_, quad_.alpha_max, panels)));
  }
  return *levels_[static_cast<std::size_t>(level)];
}

void Solver::prepare(int levels) const {
  if (levels > 0) table(levels - 1);
}

DeltaLResult Solver::evaluate(const Plate& plate, double omega) const {
  plate.validate();
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InvalidInput("delta_L: omega must be > 0");
  }
  DeltaLResult result;
  const te::SlabParams slab = te::make_slab_params(omega, plate, kMu0);
  if (slab.q == 0.0 && slab.mu_ratio == 1.0) {
    return result;
  }
  auto integrate = [&](const KernelTable& t) {
    return simd::slab_reflection_sum(t.alpha, t.weight, slab);
  };

  const KernelTable& base = table(0);
  result.truncation_warning = base.tail_ratio > quad_.rel_tolerance;
  std::complex<double> previous = integrate(base);
  if (quad_.rule == QuadratureRule::gauss_legendre) {
    result.value = previous;
    return result;
  }
  for (int level = 1; level <= kMaxRefinements; ++level) {
    const std::complex<double> current = integrate(table(level));
    if (std::abs(current - previous) <= quad_.rel_tolerance * std::abs(current)) {
      result.value = current;
      result.refinements = level;
      return result;
    }
    previous = current;
  }
  std::ostringstream msg;
  msg << "delta_L: quadrature did not converge to rel_tolerance " << quad_.rel_tolerance
      << " after " << kMaxRefinements << " refinements";
  throw ConvergenceError(msg.str());
}

double Solver::air_inductance() const {
  double previous = table(0).air_inductance;
  if (quad_.rule == QuadratureRule::gauss_legendre) {
    return previous;
  }
  for (int level = 1; level <= kMaxRefinements; ++level) {
    const double current = table(level).air_inductance;
    if (std::abs(current - previous) <= quad_.rel_tolerance * std::abs(current)) {
      return current;
    }
    previous = current;
  }
  throw ConvergenceError("delta_L_air: quadrature did not converge");
}

std::complex<double> delta_L(const CoilPair& coil, const Plate& plate, double omega,
                             const QuadratureSpec& quad) {
  return Solver(coil, quad).evaluate(plate, omega).value;
}

double delta_L_air(const CoilPair& coil, const QuadratureSpec& quad) {
  return Solver(coil, quad).air_inductance();
}

} // namespace eddy::dd
