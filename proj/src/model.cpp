#include "eddy/model.hpp"

#include "eddy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eddy {

namespace {

void require(bool ok, const char* what) {
  if (!ok) {
    throw InvalidInput(what);
  }
}

} // namespace

void CoilPair::validate() const {
  require(std::isfinite(inner_radius) && std::isfinite(outer_radius) &&
              std::isfinite(coil_height) && std::isfinite(gap) &&
              std::isfinite(liftoff) && std::isfinite(drive_current),
          "coil: non-finite dimension");
  require(inner_radius > 0.0, "coil: inner_radius must be > 0");
  require(outer_radius > inner_radius, "coil: outer_radius must exceed inner_radius");
  require(coil_height > 0.0, "coil: coil_height must be > 0");
  require(gap >= 0.0, "coil: gap must be >= 0");
  require(liftoff > 0.0, "coil: liftoff must be > 0");
  require(turns_tx >= 1 && turns_rx >= 1, "coil: turn counts must be >= 1");
  require(drive_current > 0.0, "coil: drive_current must be > 0");
}

void Plate::validate() const {
  require(std::isfinite(conductivity) && conductivity >= 0.0,
          "plate: conductivity must be finite and >= 0");
  require(std::isfinite(thickness) && thickness > 0.0, "plate: thickness must be > 0");
  require(std::isfinite(relative_permeability) && relative_permeability >= 1.0,
          "plate: relative_permeability must be >= 1");
}

void SweepSpec::validate() const {
  require(std::isfinite(f_min) && std::isfinite(f_max), "sweep: non-finite frequency");
  require(f_min > 0.0, "sweep: f_min must be > 0");
  require(f_max >= f_min, "sweep: f_max must be >= f_min");
  require(n_points >= 1, "sweep: n_points must be >= 1");
  require(n_points != 1 || f_min == f_max,
          "sweep: a single-point grid needs f_min == f_max");
  require(n_points == 1 || f_max > f_min,
          "sweep: a multi-point grid needs f_max > f_min");
}

void InductanceSpectrum::validate() const {
  require(frequencies.size() == delta_L.size(), "spectrum: length mismatch");
  for (std::size_t i = 1; i < frequencies.size(); ++i) {
    require(frequencies[i] > frequencies[i - 1],
            "spectrum: frequencies must be strictly increasing");
  }
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::thin_plate ? "thin_plate" : "dodd_deeds";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "thin_plate") return ModelKind::thin_plate;
  if (name == "dodd_deeds") return ModelKind::dodd_deeds;
  throw InvalidInput("unknown model '" + std::string(name) +
                     "' (expected thin_plate or dodd_deeds)");
}

std::string_view to_string(Spacing spacing) {
  return spacing == Spacing::logarithmic ? "log" : "linear";
}

Spacing spacing_from_string(std::string_view name) {
  if (name == "log" || name == "logarithmic") return Spacing::logarithmic;
  if (name == "linear" || name == "lin") return Spacing::linear;
  throw InvalidInput("unknown spacing '" + std::string(name) + "' (expected log or linear)");
}

CoilPair default_sensor() {
  CoilPair c;
  c.inner_radius = 12.0e-3 / 2.0;
  c.outer_radius = 12.63e-3 / 2.0;
  c.coil_height = 8.0e-3;
  c.gap = 2.0e-3;
  c.liftoff = 1.0e-3;
  c.turns_tx = 25;
  c.turns_rx = 25;
  c.drive_current = 10.0e-3;
  return c;
}

SpatialFrequency derive_alpha0(const CoilPair& coil) {
  coil.validate();
  return {1.0 / std::min(coil.inner_radius, coil.coil_height)};
}

std::vector<double> frequency_grid(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_points;
  std::vector<double> f(n);
  if (n == 1) {
    f[0] = spec.f_min;
    return f;
  }
  const double last = static_cast<double>(n - 1);
  if (spec.spacing == Spacing::logarithmic) {
    const double lo = std::log(spec.f_min);
    const double span = std::log(spec.f_max) - lo;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = std::exp(lo + span * (static_cast<double>(i) / last));
    }
  } else {
    const double span = spec.f_max - spec.f_min;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = spec.f_min + span * (static_cast<double>(i) / last);
    }
  }
  // Endpoints are pinned so the grid is inclusive bit-for-bit.
  f.front() = spec.f_min;
  f.back() = spec.f_max;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(f[i] > f[i - 1])) {
      throw InvalidInput("sweep: grid collapsed; reduce n_points or widen the range");
    }
  }
  return f;
}

} // namespace eddy
