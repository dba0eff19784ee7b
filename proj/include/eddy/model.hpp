#pragma once

// Domain types shared by every solver. All quantities are SI.

#include <complex>
#include <cstddef>
#include <numbers>
#include <string_view>
#include <vector>

namespace eddy {

/// Vacuum permeability, H/m (pre-2019 exact definition).
inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;

/// Coaxial transmitter/receiver pair with rectangular winding cross-sections.
/// Both coils share radii and height; the lower coil sits `liftoff` above the
/// plate and the upper one a further `gap` above the lower coil's top face.
struct CoilPair {
  double inner_radius = 0.0;  // m
  double outer_radius = 0.0;  // m
  double coil_height = 0.0;   // m, per coil
  double gap = 0.0;           // m
  double liftoff = 0.0;       // m
  int turns_tx = 1;
  int turns_rx = 1;
  double drive_current = 0.0; // A

  /// Throws InvalidInput when an invariant is violated.
  void validate() const;

  double lower_bottom() const { return liftoff; }
  double lower_top() const { return liftoff + coil_height; }
  double upper_bottom() const { return liftoff + coil_height + gap; }
  double upper_top() const { return upper_bottom() + coil_height; }

  friend bool operator==(const CoilPair&, const CoilPair&) = default;
};

/// A single laterally infinite conductive layer.
struct Plate {
  double conductivity = 0.0;          // S/m
  double relative_permeability = 1.0;
  double thickness = 0.0;             // m

  void validate() const;
  bool is_magnetic() const { return relative_permeability != 1.0; }
  double sigma_thickness() const { return conductivity * thickness; }

  friend bool operator==(const Plate&, const Plate&) = default;
};

enum class Spacing { logarithmic, linear };

struct SweepSpec {
  double f_min = 0.0; // Hz
  double f_max = 0.0; // Hz
  std::size_t n_points = 1;
  Spacing spacing = Spacing::logarithmic;

  void validate() const;
};

enum class ModelKind { thin_plate, dodd_deeds };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);
std::string_view to_string(Spacing spacing);
Spacing spacing_from_string(std::string_view name);

/// Per-frequency complex inductance change. `normalized` spectra hold
/// dL / L_air (dimensionless); otherwise values are in henries.
struct InductanceSpectrum {
  std::vector<double> frequencies;
  std::vector<std::complex<double>> delta_L;
  bool normalized = false;
  ModelKind model = ModelKind::thin_plate;

  std::size_t size() const { return frequencies.size(); }
  /// Throws InvalidInput on length mismatch or non-increasing frequencies.
  void validate() const;
};

/// Representative transverse wavenumber of the single-mode model, 1/m.
struct SpatialFrequency {
  double alpha0 = 0.0;
};

/// Table I sensor: 12 / 12.63 mm diameters, 8 mm coils, 2 mm gap, 1 mm
/// lift-off, 25/25 turns, 10 mA drive.
CoilPair default_sensor();

/// 1 / min(inner_radius, coil_height). The radial winding depth is not a
/// candidate: it would push alpha0 out of the thin-plate regime.
SpatialFrequency derive_alpha0(const CoilPair& coil);

std::vector<double> frequency_grid(const SweepSpec& spec);

inline double angular(double frequency_hz) {
  return 2.0 * std::numbers::pi * frequency_hz;
}

} // namespace eddy
