#pragma once

// Scenario files: a sectioned key = value text format whose keys carry their
// unit (thickness_mm, conductivity_MSm, f_min_kHz, ...). Values are converted
// to SI once, at parse time. See docs/scenario-format.md.

#include "eddy/dodd_deeds.hpp"
#include "eddy/model.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace eddy {

struct Scenario {
  CoilPair coil;
  std::map<std::string, Plate> plates;
  SweepSpec sweep;
  dd::QuadratureSpec quadrature;
  /// True when the file had no [quadrature] section.
  bool quadrature_defaulted = true;
  std::optional<double> alpha0_override;
  /// FNV-1a 64 of the source text, 16 hex digits.
  std::string hash;

  /// Throws InvalidInput naming the plate when it is not defined.
  const Plate& plate(std::string_view name) const;
};

/// Throws InvalidInput with a line number on any syntax, unit or range error.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text for a scenario (SI-converted values in mm, MS/m, Hz).
std::string format_scenario(const Scenario& scenario, std::string_view comment = {});

/// "[plate NAME]" block for one plate.
std::string format_plate_section(std::string_view name, const Plate& plate);

std::string fnv1a_hex(std::string_view bytes);

/// Shortest decimal text that parses back to the same double.
std::string shortest(double value);

enum class Dimension { length, conductivity, frequency };

/// Parse "2.0mm", "55um", "17.3MS/m", "1e7S/m", "100kHz"; a bare number is SI.
double parse_quantity(std::string_view text, Dimension dim);

} // namespace eddy
