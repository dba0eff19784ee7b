#include "eddy/te_layered.hpp"

#include "eddy/errors.hpp"

#include <cmath>

namespace eddy::te {

LayerWavenumber wavenumber(double alpha0, double omega, double sigma, double mu) {
  const double q = omega * sigma * mu;
  if (q == 0.0) {
    return {cplx(alpha0, 0.0)};
  }
  return {std::sqrt(cplx(alpha0 * alpha0, q))};
}

InterfaceCoeffs fresnel(LayerWavenumber k_i, LayerWavenumber k_j, double mu_i, double mu_j) {
  const cplx a = mu_j * k_i.k;
  const cplx b = mu_i * k_j.k;
  const cplx den = a + b;
  if (std::abs(den) == 0.0 || !std::isfinite(std::abs(den))) {
    throw InvalidInput("fresnel: degenerate denominator mu_j*k_i + mu_i*k_j");
  }
  return {(a - b) / den, 2.0 * a / den};
}

SlabParams make_slab_params(double omega, const Plate& plate, double ambient_mu) {
  const double mu_plate = kMu0 * plate.relative_permeability;
  return {omega * plate.conductivity * mu_plate, mu_plate / ambient_mu, plate.thickness};
}

cplx expm1(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double em1 = std::expm1(x);
  const double s = std::sin(0.5 * y);
  // cos(y) - 1 = -2 sin^2(y/2)
  const double re = em1 * std::cos(y) - 2.0 * s * s;
  const double im = (em1 + 1.0) * std::sin(y);
  return {re, im};
}

cplx slab_reflection(double alpha, const SlabParams& slab) {
  if (slab.q == 0.0 && slab.mu_ratio == 1.0) {
    return {0.0, 0.0};
  }
  const cplx k2 = std::sqrt(cplx(alpha * alpha, slab.q));
  const double m = slab.mu_ratio;
  const cplx s = m * alpha + k2;
  // m*alpha - k2 with k2 - alpha = j q / (k2 + alpha)
  const cplx num = (m - 1.0) * alpha - cplx(0.0, slab.q) / (k2 + alpha);
  const cplx r12 = num / s;

  const cplx two_k2d = 2.0 * k2 * slab.thickness;
  if (two_k2d.real() > kHalfSpaceExponent) {
    return r12;
  }
  const cplx one_minus_e = -expm1(-two_k2d);
  const cplx e = 1.0 - one_minus_e;
  // 1 - R12^2 = (1 - R12)(1 + R12) = 4 m alpha k2 / s^2
  const cplx den = one_minus_e + e * (4.0 * m * alpha) * k2 / (s * s);
  return r12 * one_minus_e / den;
}

cplx generalized_reflection(double alpha0, double omega, const Plate& plate, double ambient_mu) {
  plate.validate();
  if (!(alpha0 > 0.0) || !(omega >= 0.0) || !(ambient_mu > 0.0)) {
    throw InvalidInput("generalized_reflection: need alpha0 > 0, omega >= 0, ambient_mu > 0");
  }
  return slab_reflection(alpha0, make_slab_params(omega, plate, ambient_mu));
}

} // namespace eddy::te
