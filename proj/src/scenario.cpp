#include "eddy/scenario.hpp"

#include "eddy/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <span>
#include <sstream>

namespace eddy {

namespace {

// A unit is a power of ten applied to the decimal text before conversion, so
// "0.56" mm and the literal 0.56e-3 are the same double.
struct Unit {
  std::string_view suffix;
  int exponent;
};

constexpr Unit kLengthUnits[] = {{"m", 0}, {"mm", -3}, {"um", -6}};
constexpr Unit kConductivityUnits[] = {{"Sm", 0}, {"MSm", 6}};
constexpr Unit kFrequencyUnits[] = {{"Hz", 0}, {"kHz", 3}, {"MHz", 6}};
constexpr Unit kCurrentUnits[] = {{"A", 0}, {"mA", -3}};
constexpr Unit kWavenumberUnits[] = {{"per_m", 0}};

enum class Kind { length, conductivity, frequency, current, wavenumber, count, real, word };

struct KeySpec {
  std::string_view base;
  Kind kind;
};

constexpr KeySpec kCoilKeys[] = {
    {"inner_radius", Kind::length}, {"outer_radius", Kind::length},
    {"coil_height", Kind::length},  {"gap", Kind::length},
    {"liftoff", Kind::length},      {"turns_tx", Kind::count},
    {"turns_rx", Kind::count},      {"drive_current", Kind::current},
};
constexpr KeySpec kPlateKeys[] = {
    {"conductivity", Kind::conductivity},
    {"thickness", Kind::length},
    {"relative_permeability", Kind::real},
};
constexpr KeySpec kSweepKeys[] = {
    {"f_min", Kind::frequency},
    {"f_max", Kind::frequency},
    {"n_points", Kind::count},
    {"spacing", Kind::word},
};
constexpr KeySpec kQuadratureKeys[] = {
    {"alpha_max", Kind::wavenumber},
    {"n_panels", Kind::count},
    {"rule", Kind::word},
    {"rel_tolerance", Kind::real},
};
constexpr KeySpec kModelKeys[] = {{"alpha0", Kind::wavenumber}};

std::span<const Unit> units_for(Kind kind) {
  switch (kind) {
  case Kind::length: return kLengthUnits;
  case Kind::conductivity: return kConductivityUnits;
  case Kind::frequency: return kFrequencyUnits;
  case Kind::current: return kCurrentUnits;
  case Kind::wavenumber: return kWavenumberUnits;
  default: return {};
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw InvalidInput("scenario line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view text, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    fail(line, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

// Parse `text` as a decimal number times 10^exponent, rounding once.
double parse_scaled(std::string_view text, int exponent, int line) {
  std::string_view mantissa = text;
  int e = 0;
  if (const auto pos = text.find_first_of("eE"); pos != std::string_view::npos) {
    mantissa = text.substr(0, pos);
    std::string_view tail = text.substr(pos + 1);
    if (!tail.empty() && tail.front() == '+') tail.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), e);
    if (ec != std::errc() || ptr != tail.data() + tail.size()) {
      fail(line, "not a number: '" + std::string(text) + "'");
    }
  }
  if (mantissa.empty() || mantissa.find_first_of("eE") != std::string_view::npos) {
    fail(line, "not a number: '" + std::string(text) + "'");
  }
  return parse_number(std::string(mantissa) + "e" + std::to_string(e + exponent), line);
}

struct Value {
  double number = 0.0;
  std::string word;
  int line = 0;
};

using Section = std::map<std::string, Value>;

// Resolve `key` against the section's key table; returns the base name and
// stores the SI value.
void store(Section& section, std::span<const KeySpec> keys, std::string_view key,
           std::string_view raw, int line, std::string_view section_name) {
  for (const KeySpec& spec : keys) {
    if (!key.starts_with(spec.base)) continue;
    const std::string_view rest = key.substr(spec.base.size());
    Value v;
    v.line = line;
    const auto units = units_for(spec.kind);
    if (units.empty()) {
      if (!rest.empty()) continue;
      if (spec.kind == Kind::word) {
        v.word = std::string(raw);
      } else {
        v.number = parse_number(raw, line);
        if (spec.kind == Kind::count &&
            (v.number != std::floor(v.number) || v.number < 0 || v.number > 1e9)) {
          fail(line, std::string(key) + " must be a non-negative integer");
        }
      }
    } else {
      if (rest.size() < 2 || rest[0] != '_') continue;
      const std::string_view suffix = rest.substr(1);
      const Unit* unit = nullptr;
      for (const Unit& u : units) {
        if (u.suffix == suffix) unit = &u;
      }
      if (unit == nullptr) {
        fail(line, "unknown unit '" + std::string(suffix) + "' for " + std::string(spec.base));
      }
      v.number = parse_scaled(raw, unit->exponent, line);
    }
    if (!section.emplace(std::string(spec.base), v).second) {
      fail(line, std::string(spec.base) + " given twice in [" + std::string(section_name) + "]");
    }
    return;
  }
  fail(line, "unknown key '" + std::string(key) + "' in [" + std::string(section_name) + "]");
}

const Value& need(const Section& s, std::string_view key, std::string_view section) {
  const auto it = s.find(std::string(key));
  if (it == s.end()) {
    throw InvalidInput("scenario: [" + std::string(section) + "] is missing " + std::string(key));
  }
  return it->second;
}

template <class F>
void checked(int line, F&& f) {
  try {
    f();
  } catch (const InvalidInput& e) {
    fail(line, e.what());
  }
}

// Shortest decimal text t with parse_scaled(t, exponent) == value, written in
// plain notation when that stays short.
std::string scaled(double value, int exponent) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  const std::string_view sci(buf, static_cast<std::size_t>(res.ptr - buf));
  const auto epos = sci.find('e');
  int e = 0;
  std::string_view etext = sci.substr(epos + 1);
  if (etext.front() == '+') etext.remove_prefix(1);
  std::from_chars(etext.data(), etext.data() + etext.size(), e);
  e -= exponent;

  std::string sign;
  std::string digits;
  for (char c : sci.substr(0, epos)) {
    if (c == '-') sign = "-";
    else if (c != '.') digits += c;
  }
  if (e < -6 || e > 15) {
    std::string m = digits.substr(0, 1);
    if (digits.size() > 1) m += "." + digits.substr(1);
    return sign + m + "e" + std::to_string(e);
  }
  // value = 0.d1 d2 ... dn * 10^(e + 1)
  const int point = e + 1;
  std::string out;
  if (point <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
  } else if (point >= static_cast<int>(digits.size())) {
    out = digits + std::string(static_cast<std::size_t>(point) - digits.size(), '0');
  } else {
    out = digits.substr(0, static_cast<std::size_t>(point)) + "." +
          digits.substr(static_cast<std::size_t>(point));
  }
  return sign + out;
}

} // namespace

const Plate& Scenario::plate(std::string_view name) const {
  const auto it = plates.find(std::string(name));
  if (it == plates.end()) {
    std::string known;
    for (const auto& [k, _] : plates) known += (known.empty() ? "" : ", ") + k;
    throw InvalidInput("unknown plate '" + std::string(name) + "' (defined: " + known + ")");
  }
  return it->second;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string shortest(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

Scenario parse_scenario(std::string_view text) {
  Section coil;
  Section sweep;
  Section quad;
  Section model;
  std::map<std::string, Section> plates;
  std::set<std::string> seen_sections;
  Section* current = nullptr;
  std::span<const KeySpec> current_keys;
  std::string current_name;
  bool has_quadrature = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty() || line.front() == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const std::string_view header = trim(line.substr(1, line.size() - 2));
      std::string name(header);
      if (header.starts_with("plate")) {
        const std::string_view plate_name = trim(header.substr(5));
        if (plate_name.empty() || header.size() == 5 || (header[5] != ' ' && header[5] != '\t')) {
          fail(line_no, "plate sections are written [plate NAME]");
        }
        name = "plate " + std::string(plate_name);
        current = &plates[std::string(plate_name)];
        current_keys = kPlateKeys;
      } else if (header == "coil") {
        current = &coil;
        current_keys = kCoilKeys;
      } else if (header == "sweep") {
        current = &sweep;
        current_keys = kSweepKeys;
      } else if (header == "quadrature") {
        current = &quad;
        current_keys = kQuadratureKeys;
        has_quadrature = true;
      } else if (header == "model") {
        current = &model;
        current_keys = kModelKeys;
      } else {
        fail(line_no, "unknown section [" + name + "]");
      }
      if (!seen_sections.insert(name).second) {
        fail(line_no, "section [" + name + "] appears twice");
      }
      current_name = name;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    if (current == nullptr) fail(line_no, "key outside any section");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(line_no, "empty key or value");
    store(*current, current_keys, key, value, line_no, current_name);
  }

  Scenario sc;
  sc.hash = fnv1a_hex(text);

  if (!seen_sections.contains("coil")) throw InvalidInput("scenario: missing [coil] section");
  if (!seen_sections.contains("sweep")) throw InvalidInput("scenario: missing [sweep] section");
  if (plates.empty()) throw InvalidInput("scenario: no [plate NAME] section");

  sc.coil.inner_radius = need(coil, "inner_radius", "coil").number;
  sc.coil.outer_radius = need(coil, "outer_radius", "coil").number;
  sc.coil.coil_height = need(coil, "coil_height", "coil").number;
  sc.coil.gap = need(coil, "gap", "coil").number;
  sc.coil.liftoff = need(coil, "liftoff", "coil").number;
  sc.coil.turns_tx = static_cast<int>(need(coil, "turns_tx", "coil").number);
  sc.coil.turns_rx = static_cast<int>(need(coil, "turns_rx", "coil").number);
  sc.coil.drive_current = need(coil, "drive_current", "coil").number;
  sc.coil.validate();

  for (const auto& [name, section] : plates) {
    Plate p;
    p.conductivity = need(section, "conductivity", "plate " + name).number;
    p.thickness = need(section, "thickness", "plate " + name).number;
    if (const auto it = section.find("relative_permeability"); it != section.end()) {
      p.relative_permeability = it->second.number;
    }
    try {
      p.validate();
    } catch (const InvalidInput& e) {
      throw InvalidInput("scenario: [plate " + name + "] " + e.what());
    }
    sc.plates.emplace(name, p);
  }

  sc.sweep.f_min = need(sweep, "f_min", "sweep").number;
  sc.sweep.f_max = need(sweep, "f_max", "sweep").number;
  sc.sweep.n_points = static_cast<std::size_t>(need(sweep, "n_points", "sweep").number);
  if (const auto it = sweep.find("spacing"); it != sweep.end()) {
    checked(it->second.line, [&] { sc.sweep.spacing = spacing_from_string(it->second.word); });
  }
  sc.sweep.validate();

  sc.quadrature = dd::default_quadrature(sc.coil);
  sc.quadrature_defaulted = !has_quadrature;
  if (const auto it = quad.find("alpha_max"); it != quad.end()) sc.quadrature.alpha_max = it->second.number;
  if (const auto it = quad.find("n_panels"); it != quad.end()) sc.quadrature.n_panels = static_cast<int>(it->second.number);
  if (const auto it = quad.find("rel_tolerance"); it != quad.end()) sc.quadrature.rel_tolerance = it->second.number;
  if (const auto it = quad.find("rule"); it != quad.end()) {
    checked(it->second.line, [&] { sc.quadrature.rule = dd::quadrature_rule_from_string(it->second.word); });
  }
  sc.quadrature.validate();

  if (const auto it = model.find("alpha0"); it != model.end()) {
    if (!(it->second.number > 0.0)) fail(it->second.line, "alpha0 must be > 0");
    sc.alpha0_override = it->second.number;
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInput("cannot open scenario file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string format_plate_section(std::string_view name, const Plate& plate) {
  std::ostringstream out;
  out << "[plate " << name << "]\n"
      << "conductivity_MSm = " << scaled(plate.conductivity, 6) << "\n"
      << "thickness_mm = " << scaled(plate.thickness, -3) << "\n"
      << "relative_permeability = " << shortest(plate.relative_permeability) << "\n";
  return out.str();
}

std::string format_scenario(const Scenario& sc, std::string_view comment) {
  std::ostringstream out;
  if (!comment.empty()) {
    std::size_t pos = 0;
    while (pos < comment.size()) {
      const std::size_t end = std::min(comment.find('\n', pos), comment.size());
      out << "# " << comment.substr(pos, end - pos) << "\n";
      pos = end + 1;
    }
    out << "\n";
  }
  const CoilPair& c = sc.coil;
  out << "[coil]\n"
      << "inner_radius_mm = " << scaled(c.inner_radius, -3) << "\n"
      << "outer_radius_mm = " << scaled(c.outer_radius, -3) << "\n"
      << "coil_height_mm = " << scaled(c.coil_height, -3) << "\n"
      << "gap_mm = " << scaled(c.gap, -3) << "\n"
      << "liftoff_mm = " << scaled(c.liftoff, -3) << "\n"
      << "turns_tx = " << c.turns_tx << "\n"
      << "turns_rx = " << c.turns_rx << "\n"
      << "drive_current_mA = " << scaled(c.drive_current, -3) << "\n\n";
  for (const auto& [name, plate] : sc.plates) {
    out << format_plate_section(name, plate) << "\n";
  }
  out << "[sweep]\n"
      << "f_min_Hz = " << scaled(sc.sweep.f_min, 0) << "\n"
      << "f_max_Hz = " << scaled(sc.sweep.f_max, 0) << "\n"
      << "n_points = " << sc.sweep.n_points << "\n"
      << "spacing = " << to_string(sc.sweep.spacing) << "\n";
  if (!sc.quadrature_defaulted) {
    out << "\n[quadrature]\n"
        << "alpha_max_per_m = " << shortest(sc.quadrature.alpha_max) << "\n"
        << "n_panels = " << sc.quadrature.n_panels << "\n"
        << "rule = " << dd::to_string(sc.quadrature.rule) << "\n"
        << "rel_tolerance = " << shortest(sc.quadrature.rel_tolerance) << "\n";
  }
  if (sc.alpha0_override) {
    out << "\n[model]\nalpha0_per_m = " << shortest(*sc.alpha0_override) << "\n";
  }
  return out.str();
}

double parse_quantity(std::string_view text, Dimension dim) {
  text = trim(text);
  const auto unit_start = text.find_first_not_of("0123456789.+-eE");
  std::string_view number = text.substr(0, unit_start);
  std::string_view unit = unit_start == std::string_view::npos ? std::string_view{}
                                                               : trim(text.substr(unit_start));
  // "2e" + "m" style ambiguity does not arise: no unit starts with e or E.
  struct Suffix {
    std::string_view text;
    int exponent;
  };
  static constexpr Suffix lengths[] = {{"", 0}, {"m", 0}, {"mm", -3}, {"um", -6}};
  static constexpr Suffix conductivities[] = {{"", 0}, {"S/m", 0}, {"MS/m", 6}};
  static constexpr Suffix frequencies[] = {{"", 0}, {"Hz", 0}, {"kHz", 3}, {"MHz", 6}};
  const std::span<const Suffix> table =
      dim == Dimension::length         ? std::span<const Suffix>(lengths)
      : dim == Dimension::conductivity ? std::span<const Suffix>(conductivities)
                                       : std::span<const Suffix>(frequencies);
  for (const Suffix& s : table) {
    if (s.text != unit) continue;
    try {
      return parse_scaled(trim(number), s.exponent, 0);
    } catch (const InvalidInput&) {
      throw InvalidInput("not a quantity: '" + std::string(text) + "'");
    }
  }
  throw InvalidInput("unknown unit '" + std::string(unit) + "' in '" + std::string(text) + "'");
}

} // namespace eddy
