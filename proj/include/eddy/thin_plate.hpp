#pragma once

// Single-alpha0 plate response normalized by the free-space coupling, and the
// conductivity-thickness equivalence transform.

#include "eddy/model.hpp"

#include <complex>

namespace eddy::thin {

/// Above this D*alpha0 the thin form is flagged as out of its regime.
inline constexpr double kThinRegimeLimit = 0.1;

/// dL / L_air at one frequency.
struct ThinPlateResponse {
  std::complex<double> value;
  bool outside_thin_regime = false;
};

struct EquivalentPlate {
  Plate plate;
  double sigma_thickness_product = 0.0; // S
};

/// Full single-mode response: the generalized reflection of the plate at
/// k1 = alpha0. Requires a non-magnetic plate, alpha0 > 0 and omega > 0.
ThinPlateResponse normalized_response_exact(double alpha0, double omega, const Plate& plate);

/// First-order-in-D form of the exact response:
///
///   v = -j w mu0 (sigma D) / (2 alpha0 + j w mu0 (sigma D))
///
/// It depends on the plate only through sigma*D. Flags (does not reject)
/// D*alpha0 > kThinRegimeLimit.
ThinPlateResponse normalized_response_thin(double alpha0, double omega, const Plate& plate);

/// Same expression, parameterized directly by the sigma*D product (S).
std::complex<double> thin_response(double alpha0, double omega, double sigma_d);

/// Conductivity that keeps sigma*D when the thickness becomes
/// `target_thickness`. Throws InvalidInput for target_thickness <= 0 or a
/// magnetic plate.
EquivalentPlate equivalent_plate(const Plate& original, double target_thickness);

/// Thickness that keeps sigma*D at conductivity `target_conductivity`.
EquivalentPlate equivalent_thickness(const Plate& original, double target_conductivity);

} // namespace eddy::thin
