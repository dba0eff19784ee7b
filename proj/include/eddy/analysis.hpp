#pragma once

#include "eddy/dodd_deeds.hpp"
#include "eddy/model.hpp"

#include <array>
#include <optional>
#include <vector>

namespace eddy::analysis {

struct SweepOptions {
  /// Required for dodd_deeds, rejected for thin_plate.
  std::optional<dd::QuadratureSpec> quadrature;
  /// thin_plate only; defaults to derive_alpha0(coil).
  std::optional<double> alpha0;
  unsigned threads = 1;
};

struct SweepReport {
  InductanceSpectrum spectrum;
  double alpha0 = 0.0;               // thin_plate only
  bool outside_thin_regime = false;  // thin_plate: D*alpha0 above the limit
  bool truncation_warning = false;   // dodd_deeds
  int max_refinements = 0;           // dodd_deeds
};

/// Evaluate one model on every grid frequency. Results are stored by
/// frequency index, so output is independent of `threads`. Solver errors are
/// rethrown with the failing frequency prepended.
SweepReport run_sweep(ModelKind model, const CoilPair& coil, const Plate& plate,
                      const SweepSpec& spec, const SweepOptions& options = {});

/// Same as run_sweep for dodd_deeds, reusing a solver's kernel cache.
SweepReport run_sweep(const dd::Solver& solver, const Plate& plate, const SweepSpec& spec,
                      unsigned threads = 1);

inline InductanceSpectrum sweep(ModelKind model, const CoilPair& coil, const Plate& plate,
                                const SweepSpec& spec, const SweepOptions& options = {}) {
  return run_sweep(model, coil, plate, spec, options).spectrum;
}

struct FrequencyBand {
  double lo = 0.0;
  double hi = 0.0;
};

/// Frequencies where |reference| falls below this fraction of its peak are
/// left out of the statistic.
inline constexpr double kReferenceFloor = 1e-3;

struct EquivalenceReport {
  std::vector<double> frequencies;
  /// |a - b| / |a| per frequency (0 when both vanish, +inf when only a does).
  std::vector<double> per_frequency_rel_error;
  /// Frequencies outside the band or under the reference floor.
  std::vector<bool> excluded;
  std::size_t below_floor_count = 0;
  double max_rel_error = 0.0;
  double max_rel_error_frequency = 0.0;
  /// Lowest and highest frequency that entered the maximum.
  FrequencyBand max_rel_error_band;
  std::optional<FrequencyBand> band_filter;
};

/// Relative discrepancy of b against the reference a. Throws InvalidInput on
/// grid or normalization mismatch, or when the band selects nothing.
EquivalenceReport compare(const InductanceSpectrum& a, const InductanceSpectrum& b,
                          std::optional<FrequencyBand> band = std::nullopt);

struct SigmaDFit {
  double sigma_d = 0.0;
  std::optional<double> alpha0_fit;
  /// sqrt(sum |model - data|^2) / sqrt(sum |data|^2)
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// residual_norm after the start point and each accepted step
  std::vector<double> residual_history;
};

struct FitOptions {
  int max_iterations = 200;
};

/// Least-squares sigma*D (and optionally alpha0) from a normalized spectrum,
/// by Levenberg-damped Gauss-Newton on the thin-plate model. The thin model
/// depends on sigma*D / alpha0 only, so with fit_alpha0 the pair is recovered
/// only up to that ratio; alpha0 stays at the supplied value when it is
/// already consistent.
SigmaDFit fit_sigma_d(const InductanceSpectrum& spectrum, double alpha0, bool fit_alpha0,
                      const FitOptions& options = {});

/// Start point: exact one-point inversion at the lowest usable frequency,
/// which tends to the slope law Im(s)/w -> -mu0 sigma D / (2 alpha0).
double initial_sigma_d_guess(const InductanceSpectrum& spectrum, double alpha0);

struct Objective {
  double value = 0.0;
  /// d/d(sigma_d), d/d(alpha0)
  std::array<double, 2> gradient{};
};

/// sum_i |thin(alpha0, w_i, sigma_d) - s_i|^2 with its analytic gradient.
Objective sigma_d_objective(const InductanceSpectrum& spectrum, double sigma_d, double alpha0);

} // namespace eddy::analysis
