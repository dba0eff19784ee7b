#pragma once

// Spectrum CSV files:
//
//   # key: value          metadata, one per line, in writer order
//   freq_hz,dL_re,dL_im
//   1000,1.2345678901234567e-08,-3.2e-10
//
// Numbers carry 17 significant digits. `model` and `normalized` are required
// metadata keys; the rest are carried through untouched.

#include "eddy/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eddy {

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct SpectrumFile {
  InductanceSpectrum spectrum;
  Metadata metadata;

  std::optional<std::string> find(std::string_view key) const;
};

/// `metadata` is written after the model and normalized lines.
void write_spectrum_csv(std::ostream& out, const InductanceSpectrum& spectrum,
                        const Metadata& metadata);
std::string format_spectrum_csv(const InductanceSpectrum& spectrum, const Metadata& metadata);

/// Throws InvalidInput with a line number on malformed input.
SpectrumFile parse_spectrum_csv(std::string_view text);
SpectrumFile read_spectrum_csv(const std::filesystem::path& path);

/// "%.17g"
std::string format_g17(double value);

/// Write `text` to `path`, throwing InvalidInput when the file cannot be
/// opened.
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace eddy
