#pragma once

// Absolute mutual-inductance change of a coaxial coil pair above a plate:
//
//   dL(w) = C * Int_0^amax  P(a)^2 / a^6 * A(a) * R~(a, w)  da
//
//   P(a) = Int_{a r1}^{a r2} x J1(x) dx
//   A(a) = (e^{-a l1T} - e^{-a l2T}) (e^{-a l1R} - e^{-a l2R})
//   C    = pi mu0 N_T N_R / ((r2 - r1)^2 h_T h_R)
//
// with R~ the slab reflection of te_layered evaluated at k1 = a. The
// free-space coupling uses the same kernel with A replaced by the direct
// coil-to-coil factor e^{-a g} (1 - e^{-a h})^2.

#include "eddy/model.hpp"

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

namespace eddy::dd {

enum class QuadratureRule { adaptive, gauss_legendre };

std::string_view to_string(QuadratureRule rule);
QuadratureRule quadrature_rule_from_string(std::string_view name);

struct QuadratureSpec {
  double alpha_max = 0.0; // 1/m
  int n_panels = 64;
  QuadratureRule rule = QuadratureRule::adaptive;
  double rel_tolerance = 1e-9;

  void validate() const;
};

/// Adaptive refinement doubles the panel count at most this many times.
inline constexpr int kMaxRefinements = 8;

/// alpha_max = 40 / min(liftoff, inner_radius); 64 panels; adaptive; 1e-9.
QuadratureSpec default_quadrature(const CoilPair& coil);

/// One sample of the coil kernel at spatial frequency alpha.
struct CoilKernel {
  double radial_integral = 0.0; // P(alpha)
  double axial_factor = 0.0;    // A(alpha), plate-reflected path
  double prefactor = 0.0;       // C, henries * m
};

double radial_integral(const CoilPair& coil, double alpha);
double axial_factor(const CoilPair& coil, double alpha);
double air_axial_factor(const CoilPair& coil, double alpha);
double kernel_prefactor(const CoilPair& coil);
CoilKernel coil_kernel(const CoilPair& coil, double alpha);

/// Geometric sub-panels replacing the first uniform panel; the innermost one
/// ends at width * 2^-kGradedPanels.
inline constexpr int kGradedPanels = 30;

/// Quadrature nodes over [0, alpha_max] with the frequency-independent part
/// of the integrand folded into the weights.
struct KernelTable {
  int n_panels = 0;
  double alpha_max = 0.0;
  std::vector<double> alpha;
  std::vector<double> weight;
  double air_inductance = 0.0;
  /// Upper estimate of |tail beyond alpha_max| relative to the integral of
  /// |kernel| (|R~| <= 1 for passive plates).
  double tail_ratio = 0.0;
};

KernelTable build_kernel_table(const CoilPair& coil, double alpha_max, int n_panels);

struct DeltaLResult {
  std::complex<double> value;
  int refinements = 0;
  bool truncation_warning = false;
};

/// Holds one coil/quadrature pair and a lazily grown cache of kernel tables,
/// one per refinement level. evaluate() is safe to call concurrently.
class Solver {
public:
  Solver(CoilPair coil, QuadratureSpec quad);

  /// Throws ConvergenceError if adaptive refinement fails to settle.
  DeltaLResult evaluate(const Plate& plate, double omega) const;
  double air_inductance() const;

  /// Build the tables for levels [0, levels) up front.
  void prepare(int levels) const;

  const CoilPair& coil() const { return coil_; }
  const QuadratureSpec& quadrature() const { return quad_; }

private:
  const KernelTable& table(int level) const;

  CoilPair coil_;
  QuadratureSpec quad_;
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<const KernelTable>> levels_;
};

std::complex<double> delta_L(const CoilPair& coil, const Plate& plate, double omega,
                             const QuadratureSpec& quad);
double delta_L_air(const CoilPair& coil, const QuadratureSpec& quad);

} // namespace eddy::dd
