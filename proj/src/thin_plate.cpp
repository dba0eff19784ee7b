#include "eddy/thin_plate.hpp"

#include "eddy/errors.hpp"
#include "eddy/te_layered.hpp"

#include <cmath>
#include <limits>

namespace eddy::thin {

namespace {

void require_non_magnetic(const Plate& plate) {
  if (plate.is_magnetic()) {
    throw InvalidInput("thin-plate model is defined for non-magnetic plates only");
  }
}

void require_positive(double alpha0, double omega) {
  if (!(alpha0 > 0.0) || !(omega > 0.0)) {
    throw InvalidInput("thin-plate model needs alpha0 > 0 and omega > 0");
  }
}

// Solve factor * x == product for x, preferring a representable x whose
// rounded product reproduces `product` bit-for-bit. Among such candidates the
// one with the smallest exact residual wins.
double conserving_quotient(double product, double factor) {
  const double q = product / factor;
  double best = q;
  double best_residual = std::numeric_limits<double>::infinity();
  bool found = false;
  double lo = q;
  for (int i = 0; i < 4; ++i) lo = std::nextafter(lo, 0.0);
  double x = lo;
  for (int i = 0; i < 9; ++i, x = std::nextafter(x, std::numeric_limits<double>::infinity())) {
    if (factor * x != product) continue;
    const double residual = std::abs(std::fma(factor, x, -product));
    if (!found || residual < best_residual) {
      best = x;
      best_residual = residual;
      found = true;
    }
  }
  return best;
}

} // namespace

ThinPlateResponse normalized_response_exact(double alpha0, double omega, const Plate& plate) {
  plate.validate();
  require_non_magnetic(plate);
  require_positive(alpha0, omega);
  return {te::generalized_reflection(alpha0, omega, plate, kMu0),
          plate.thickness * alpha0 > kThinRegimeLimit};
}

std::complex<double> thin_response(double alpha0, double omega, double sigma_d) {
  const std::complex<double> x(0.0, omega * kMu0 * sigma_d);
  return -x / (2.0 * alpha0 + x);
}

ThinPlateResponse normalized_response_thin(double alpha0, double omega, const Plate& plate) {
  plate.validate();
  require_non_magnetic(plate);
  require_positive(alpha0, omega);
  return {thin_response(alpha0, omega, plate.sigma_thickness()),
          plate.thickness * alpha0 > kThinRegimeLimit};
}

EquivalentPlate equivalent_plate(const Plate& original, double target_thickness) {
  original.validate();
  require_non_magnetic(original);
  if (!(target_thickness > 0.0) || !std::isfinite(target_thickness)) {
    throw InvalidInput("equivalent_plate: target thickness must be > 0");
  }
  Plate out = original;
  if (target_thickness != original.thickness) {
    out.thickness = target_thickness;
    out.conductivity = conserving_quotient(original.sigma_thickness(), target_thickness);
  }
  return {out, out.sigma_thickness()};
}

EquivalentPlate equivalent_thickness(const Plate& original, double target_conductivity) {
  original.validate();
  require_non_magnetic(original);
  if (!(target_conductivity > 0.0) || !std::isfinite(target_conductivity)) {
    throw InvalidInput("equivalent_thickness: target conductivity must be > 0");
  }
  Plate out = original;
  if (target_conductivity != original.conductivity) {
    out.conductivity = target_conductivity;
    out.thickness = conserving_quotient(original.sigma_thickness(), target_conductivity);
  }
  return {out, out.sigma_thickness()};
}

} // namespace eddy::thin
