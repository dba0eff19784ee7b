#pragma once

// TE plane-wave propagation through an air / plate / air stack.

#include "eddy/model.hpp"

#include <complex>

namespace eddy::te {

using cplx = std::complex<double>;

struct LayerWavenumber {
  cplx k;
};

struct InterfaceCoeffs {
  cplx reflection;
  cplx transmission;
};

/// Principal branch of sqrt(alpha0^2 + j*omega*sigma*mu). Exactly alpha0
/// when omega*sigma*mu == 0.
LayerWavenumber wavenumber(double alpha0, double omega, double sigma, double mu);

/// Interface coefficients for a wave going from region i into region j.
/// Throws InvalidInput when mu_j*k_i + mu_i*k_j vanishes.
InterfaceCoeffs fresnel(LayerWavenumber k_i, LayerWavenumber k_j, double mu_i, double mu_j);

/// Beyond this value of Re(2 k2 D) the slab is treated as a half-space.
inline constexpr double kHalfSpaceExponent = 40.0;

/// Slab description reduced to what the reflection needs:
///   q         = omega * sigma * mu_plate   (imaginary part of k2^2)
///   mu_ratio  = mu_plate / mu_ambient
///   thickness = D
struct SlabParams {
  double q = 0.0;
  double mu_ratio = 1.0;
  double thickness = 0.0;
};

SlabParams make_slab_params(double omega, const Plate& plate, double ambient_mu = kMu0);

/// Generalized reflection of the slab seen from the coil side at transverse
/// wavenumber `alpha`:
///
///   R~ = R12 (1 - e) / (1 - R12^2 e),   e = exp(-2 k2 D)
///
/// which equals R12 + T12 R23 T21 e / (1 - R21 R23 e) when regions 1 and 3
/// are the same medium. Evaluated without growing exponentials or
/// cancellation-prone differences; this is the scalar reference every
/// vectorized kernel is checked against.
cplx slab_reflection(double alpha, const SlabParams& slab);

/// R~12 of `plate` embedded in an ambient medium with permeability
/// `ambient_mu` and zero conductivity.
cplx generalized_reflection(double alpha0, double omega, const Plate& plate,
                            double ambient_mu = kMu0);

/// exp(z) - 1 without cancellation for small |z|.
cplx expm1(cplx z);

} // namespace eddy::te
