#include "eddy/spectrum_io.hpp"

#include "eddy/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace eddy {

namespace {

constexpr std::string_view kHeader = "freq_hz,dL_re,dL_im";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw InvalidInput("spectrum line " + std::to_string(line) + ": " + what);
}

double field(std::string_view text, int line) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    fail(line, "bad number '" + std::string(text) + "'");
  }
  return v;
}

} // namespace

std::optional<std::string> SpectrumFile::find(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_spectrum_csv(std::ostream& out, const InductanceSpectrum& spectrum,
                        const Metadata& metadata) {
  spectrum.validate();
  out << "# model: " << to_string(spectrum.model) << "\n";
  out << "# normalized: " << (spectrum.normalized ? "true" : "false") << "\n";
  for (const auto& [k, v] : metadata) {
    out << "# " << k << ": " << v << "\n";
  }
  out << kHeader << "\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    out << format_g17(spectrum.frequencies[i]) << ',' << format_g17(spectrum.delta_L[i].real())
        << ',' << format_g17(spectrum.delta_L[i].imag()) << '\n';
  }
}

std::string format_spectrum_csv(const InductanceSpectrum& spectrum, const Metadata& metadata) {
  std::ostringstream out;
  write_spectrum_csv(out, spectrum, metadata);
  return out.str();
}

SpectrumFile parse_spectrum_csv(std::string_view text) {
  SpectrumFile file;
  bool have_model = false;
  bool have_normalized = false;
  bool have_header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_header) fail(line_no, "metadata after the header row");
      const std::string_view body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      std::string key(trim(body.substr(0, colon)));
      std::string value(trim(body.substr(colon + 1)));
      try {
        if (key == "model") {
          file.spectrum.model = model_kind_from_string(value);
          have_model = true;
          continue;
        }
        if (key == "normalized") {
          if (value != "true" && value != "false") fail(line_no, "normalized must be true or false");
          file.spectrum.normalized = value == "true";
          have_normalized = true;
          continue;
        }
      } catch (const InvalidInput& e) {
        fail(line_no, e.what());
      }
      file.metadata.emplace_back(std::move(key), std::move(value));
      continue;
    }
    if (!have_header) {
      if (line != kHeader) fail(line_no, "expected header '" + std::string(kHeader) + "'");
      have_header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      fail(line_no, "expected 3 columns");
    }
    file.spectrum.frequencies.push_back(field(line.substr(0, c1), line_no));
    file.spectrum.delta_L.emplace_back(field(line.substr(c1 + 1, c2 - c1 - 1), line_no),
                                       field(line.substr(c2 + 1), line_no));
  }
  if (!have_header) throw InvalidInput("spectrum: missing header row");
  if (!have_model) throw InvalidInput("spectrum: missing '# model:' line");
  if (!have_normalized) throw InvalidInput("spectrum: missing '# normalized:' line");
  if (file.spectrum.size() == 0) throw InvalidInput("spectrum: no data rows");
  file.spectrum.validate();
  return file;
}

SpectrumFile read_spectrum_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open spectrum file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_spectrum_csv(buf.str());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InvalidInput("write failed for '" + path.string() + "'");
}

} // namespace eddy
