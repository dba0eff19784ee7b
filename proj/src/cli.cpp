#include "eddy/cli.hpp"

#include "eddy/analysis.hpp"
#include "eddy/dodd_deeds.hpp"
#include "eddy/errors.hpp"
#include "eddy/scenario.hpp"
#include "eddy/spectrum_io.hpp"
#include "eddy/thin_plate.hpp"
#include "eddy/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

namespace eddy {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string tool_string() { return std::string("eddyeq ") + kToolVersion; }

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Plain decimal for frequencies in messages, e.g. 100000 rather than 1e+05.
std::string g15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  return std::max(1u, std::thread::hardware_concurrency());
}

ordered_json coil_json(const CoilPair& c) {
  return {{"inner_radius_m", c.inner_radius}, {"outer_radius_m", c.outer_radius},
          {"coil_height_m", c.coil_height},   {"gap_m", c.gap},
          {"liftoff_m", c.liftoff},           {"turns_tx", c.turns_tx},
          {"turns_rx", c.turns_rx},           {"drive_current_A", c.drive_current}};
}

ordered_json plate_json(std::string_view name, const Plate& p) {
  return {{"name", name},
          {"conductivity_S_per_m", p.conductivity},
          {"thickness_m", p.thickness},
          {"relative_permeability", p.relative_permeability},
          {"sigma_d_S", p.sigma_thickness()}};
}

ordered_json quadrature_json(const dd::QuadratureSpec& q, bool defaulted) {
  return {{"alpha_max_per_m", q.alpha_max},
          {"n_panels", q.n_panels},
          {"rule", dd::to_string(q.rule)},
          {"rel_tolerance", q.rel_tolerance},
          {"source", defaulted ? "default" : "scenario"}};
}

std::string quadrature_line(const dd::QuadratureSpec& q) {
  return "alpha_max_per_m=" + shortest(q.alpha_max) + " n_panels=" + std::to_string(q.n_panels) +
         " rule=" + std::string(dd::to_string(q.rule)) + " rel_tolerance=" + shortest(q.rel_tolerance);
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  std::string scenario;
  std::string plate;
  std::string model = "dodd_deeds";
  std::string output;
  std::string json;
  bool normalize = false;
  int threads = 1;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
  const Scenario sc = load_scenario(a.scenario);
  const Plate& plate = sc.plate(a.plate);
  const ModelKind model = model_kind_from_string(a.model);
  const unsigned threads = resolve_threads(a.threads);

  Metadata meta;
  meta.emplace_back("tool", tool_string());
  meta.emplace_back("plate", a.plate);
  meta.emplace_back("conductivity_S_per_m", shortest(plate.conductivity));
  meta.emplace_back("thickness_m", shortest(plate.thickness));
  meta.emplace_back("relative_permeability", shortest(plate.relative_permeability));
  meta.emplace_back("scenario_hash", sc.hash);

  analysis::SweepReport report;
  double air = 0.0;
  if (model == ModelKind::dodd_deeds) {
    const dd::Solver solver(sc.coil, sc.quadrature);
    report = analysis::run_sweep(solver, plate, sc.sweep, threads);
    air = solver.air_inductance();
    if (a.normalize) {
      for (auto& v : report.spectrum.delta_L) v /= air;
      report.spectrum.normalized = true;
    }
    meta.emplace_back("quadrature", quadrature_line(sc.quadrature));
    meta.emplace_back("quadrature_source", sc.quadrature_defaulted ? "default" : "scenario");
    meta.emplace_back("air_inductance_H", format_g17(air));
    if (report.truncation_warning) {
      meta.emplace_back("warning", "integrand tail beyond alpha_max is not negligible");
      err << "warning: integrand tail beyond alpha_max is not negligible\n";
    }
  } else {
    analysis::SweepOptions opts;
    opts.alpha0 = sc.alpha0_override;
    opts.threads = threads;
    report = analysis::run_sweep(model, sc.coil, plate, sc.sweep, opts);
    meta.emplace_back("alpha0_per_m", shortest(report.alpha0));
    meta.emplace_back("alpha0_source", sc.alpha0_override ? "scenario" : "coil");
    if (report.outside_thin_regime) {
      meta.emplace_back("warning", "D*alpha0 exceeds the thin-plate regime");
      err << "warning: D*alpha0 = " << g6(plate.thickness * report.alpha0)
          << " exceeds the thin-plate regime\n";
    }
  }

  const std::string csv = format_spectrum_csv(report.spectrum, meta);
  if (a.output.empty() || a.output == "-") {
    out << csv;
  } else {
    write_text_file(a.output, csv);
  }

  if (!a.json.empty()) {
    ordered_json j;
    j["tool_version"] = kToolVersion;
    j["scenario_hash"] = sc.hash;
    j["model"] = to_string(model);
    j["normalized"] = report.spectrum.normalized;
    j["plate"] = plate_json(a.plate, plate);
    j["coil"] = coil_json(sc.coil);
    j["sweep"] = {{"f_min_Hz", sc.sweep.f_min},
                  {"f_max_Hz", sc.sweep.f_max},
                  {"n_points", sc.sweep.n_points},
                  {"spacing", to_string(sc.sweep.spacing)}};
    if (model == ModelKind::dodd_deeds) {
      j["quadrature"] = quadrature_json(sc.quadrature, sc.quadrature_defaulted);
      j["air_inductance_H"] = air;
      j["max_refinements"] = report.max_refinements;
      j["truncation_warning"] = report.truncation_warning;
    } else {
      j["quadrature"] = nullptr;
      j["alpha0_per_m"] = report.alpha0;
      j["outside_thin_regime"] = report.outside_thin_regime;
    }
    write_text_file(a.json, j.dump(2) + "\n");
  }
  return kExitOk;
}

// -------------------------------------------------------------- equivalent

struct EquivalentArgs {
  std::string scenario;
  std::string plate;
  std::string thickness;
  std::string conductivity;
};

int cmd_equivalent(const EquivalentArgs& a, std::ostream& out) {
  if (a.thickness.empty() == a.conductivity.empty()) {
    throw InvalidInput("equivalent: give exactly one of --thickness or --conductivity");
  }
  const Scenario sc = load_scenario(a.scenario);
  const Plate& original = sc.plate(a.plate);
  const thin::EquivalentPlate eq =
      a.thickness.empty()
          ? thin::equivalent_thickness(original, parse_quantity(a.conductivity, Dimension::conductivity))
          : thin::equivalent_plate(original, parse_quantity(a.thickness, Dimension::length));
  const Plate& p = eq.plate;
  out << "plate " << a.plate << ": " << g6(original.conductivity / 1e6) << " MS/m, "
      << g6(original.thickness / 1e-3) << " mm\n";
  out << "equivalent: " << g6(p.conductivity / 1e6) << " MS/m, " << g6(p.thickness / 1e-3)
      << " mm (" << g6(p.thickness / 1e-6) << " um)\n";
  out << "conductivity_S_per_m = " << shortest(p.conductivity) << "\n";
  out << "thickness_m = " << shortest(p.thickness) << "\n";
  out << "sigma_d_S = " << shortest(eq.sigma_thickness_product) << "\n";
  out << "scenario_hash = " << sc.hash << "\n\n";
  out << format_plate_section(a.plate + "_equivalent", p);
  return kExitOk;
}

// ----------------------------------------------------------------- compare

struct CompareArgs {
  std::string a;
  std::string b;
  std::string band;
  std::string output;
};

analysis::FrequencyBand parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InvalidInput("--band expects lo:hi, got '" + text + "'");
  }
  return {parse_quantity(std::string_view(text).substr(0, colon), Dimension::frequency),
          parse_quantity(std::string_view(text).substr(colon + 1), Dimension::frequency)};
}

ordered_json source_json(const std::string& path, const SpectrumFile& f) {
  ordered_json j;
  j["path"] = path;
  j["model"] = to_string(f.spectrum.model);
  j["normalized"] = f.spectrum.normalized;
  const auto hash = f.find("scenario_hash");
  j["scenario_hash"] = hash ? ordered_json(*hash) : ordered_json(nullptr);
  const auto plate = f.find("plate");
  j["plate"] = plate ? ordered_json(*plate) : ordered_json(nullptr);
  return j;
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const SpectrumFile fa = read_spectrum_csv(a.a);
  const SpectrumFile fb = read_spectrum_csv(a.b);
  std::optional<analysis::FrequencyBand> band;
  if (!a.band.empty()) band = parse_band(a.band);
  const analysis::EquivalenceReport r = analysis::compare(fa.spectrum, fb.spectrum, band);
  const analysis::FrequencyBand shown = band ? *band : r.max_rel_error_band;

  if (!a.output.empty()) {
    ordered_json j;
    j["tool_version"] = kToolVersion;
    j["reference"] = source_json(a.a, fa);
    j["candidate"] = source_json(a.b, fb);
    j["band_filter"] = band ? ordered_json{{"lo_Hz", band->lo}, {"hi_Hz", band->hi}}
                            : ordered_json(nullptr);
    j["reference_floor"] = analysis::kReferenceFloor;
    j["max_rel_error"] = r.max_rel_error;
    j["max_rel_error_frequency_Hz"] = r.max_rel_error_frequency;
    j["max_rel_error_band"] = {{"lo_Hz", r.max_rel_error_band.lo},
                               {"hi_Hz", r.max_rel_error_band.hi}};
    j["below_floor_count"] = r.below_floor_count;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < r.frequencies.size(); ++i) {
      const double e = r.per_frequency_rel_error[i];
      rows.push_back({{"freq_Hz", r.frequencies[i]},
                      {"rel_error", std::isfinite(e) ? ordered_json(e) : ordered_json(nullptr)},
                      {"excluded", static_cast<bool>(r.excluded[i])}});
    }
    j["per_frequency"] = std::move(rows);
    write_text_file(a.output, j.dump(2) + "\n");
  }
  out << "max_rel_error=" << g6(r.max_rel_error) << " in band [" << g15(shown.lo) << "," << g15(shown.hi)
      << "]\n";
  return kExitOk;
}

// ------------------------------------------------------------------ invert

struct InvertArgs {
  std::string spectrum;
  double alpha0 = 0.0;
  bool fit_alpha0 = false;
  std::string output;
  int max_iterations = analysis::FitOptions{}.max_iterations;
};

int cmd_invert(const InvertArgs& a, std::ostream& out, std::ostream& err) {
  const SpectrumFile f = read_spectrum_csv(a.spectrum);
  double alpha0 = a.alpha0;
  if (alpha0 == 0.0) {
    const auto meta = f.find("alpha0_per_m");
    if (!meta) {
      throw InvalidInput("invert: the spectrum carries no alpha0_per_m; pass --alpha0");
    }
    char* end = nullptr;
    alpha0 = std::strtod(meta->c_str(), &end);
    if (end == meta->c_str() || *end != '\0' || !(alpha0 > 0.0)) {
      throw InvalidInput("invert: bad alpha0_per_m '" + *meta + "' in spectrum file");
    }
  }
  analysis::FitOptions opts;
  opts.max_iterations = a.max_iterations;
  const analysis::SigmaDFit fit = analysis::fit_sigma_d(f.spectrum, alpha0, a.fit_alpha0, opts);
  const double alpha0_out = fit.alpha0_fit ? *fit.alpha0_fit : alpha0;

  out << "sigma_d_S = " << format_g17(fit.sigma_d) << "\n";
  out << "alpha0_per_m = " << format_g17(alpha0_out) << (fit.alpha0_fit ? " (fitted)" : " (fixed)")
      << "\n";
  out << "residual_norm = " << g6(fit.residual_norm) << "\n";
  out << "iterations = " << fit.iterations << "\n";
  out << "converged = " << (fit.converged ? "true" : "false") << "\n";

  if (!a.output.empty()) {
    ordered_json j;
    j["tool_version"] = kToolVersion;
    j["source"] = source_json(a.spectrum, f);
    j["sigma_d_S"] = fit.sigma_d;
    j["alpha0_per_m"] = alpha0_out;
    j["alpha0_fitted"] = fit.alpha0_fit.has_value();
    j["residual_norm"] = fit.residual_norm;
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    j["residual_history"] = fit.residual_history;
    write_text_file(a.output, j.dump(2) + "\n");
  }
  if (!fit.converged) {
    err << "error: inversion did not converge in " << fit.iterations << " iterations\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

// ------------------------------------------------------------- paper-cases

Scenario copper_brass_case() {
  Scenario sc;
  sc.coil = default_sensor();
  const Plate copper{59.8e6, 1.0, 0.56e-3};
  sc.plates.emplace("copper", copper);
  sc.plates.emplace("brass", thin::equivalent_plate(copper, 2.0e-3).plate);
  sc.sweep = {1e3, 500e3, 41, Spacing::logarithmic};
  return sc;
}

Scenario aluminium_case() {
  Scenario sc;
  sc.coil = default_sensor();
  const Plate aluminium{36.9e6, 1.0, 20e-6};
  sc.plates.emplace("aluminium", aluminium);
  sc.plates.emplace("aluminium_equivalent", thin::equivalent_plate(aluminium, 55e-6).plate);
  sc.plates.emplace("aluminium_rounded", Plate{13.5e6, 1.0, 55e-6});
  sc.sweep = {10.0, 1e6, 51, Spacing::logarithmic};
  return sc;
}

int cmd_paper_cases(const std::string& dir, std::ostream& out) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create '" + dir + "': " + ec.message());
  const struct {
    const char* file;
    Scenario sc;
    const char* comment;
  } cases[] = {
      {"copper_brass.scn", copper_brass_case(),
       "Copper 0.56 mm and its 2 mm equivalent at equal sigma*D.\n"
       "Compare dodd_deeds spectra over 100 kHz to 500 kHz."},
      {"aluminium.scn", aluminium_case(),
       "Aluminium foil 20 um, its 55 um equivalent, and the rounded 13.5 MS/m variant."},
  };
  for (const auto& c : cases) {
    const fs::path path = fs::path(dir) / c.file;
    write_text_file(path, format_scenario(c.sc, c.comment));
    out << path.string() << "\n";
  }
  return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thin-plate eddy-current forward models and sigma*D equivalence"};
  app.name(args.empty() ? "eddyeq" : fs::path(args[0]).filename().string());
  app.set_version_flag("--version", tool_string());
  app.require_subcommand(1);

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Sweep one plate and write a CSV spectrum");
  spectrum->add_option("scenario", sa.scenario, "Scenario file")->required();
  spectrum->add_option("--plate", sa.plate, "Plate section name")->required();
  spectrum->add_option("--model", sa.model, "thin_plate or dodd_deeds")
      ->check(CLI::IsMember({"thin_plate", "dodd_deeds"}))
      ->capture_default_str();
  spectrum->add_option("-o,--output", sa.output, "CSV output (default stdout)");
  spectrum->add_option("--json", sa.json, "Also write full metadata as JSON");
  spectrum->add_flag("--normalize", sa.normalize, "dodd_deeds: divide by the air coupling");
  spectrum->add_option("--threads", sa.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  EquivalentArgs ea;
  auto* equivalent = app.add_subcommand("equivalent", "Plate with the same sigma*D product");
  equivalent->add_option("scenario", ea.scenario, "Scenario file")->required();
  equivalent->add_option("--plate", ea.plate, "Plate section name")->required();
  equivalent->add_option("--thickness", ea.thickness, "Target thickness, e.g. 2.0mm");
  equivalent->add_option("--conductivity", ea.conductivity, "Target conductivity, e.g. 17.3MS/m");

  CompareArgs ca;
  auto* compare = app.add_subcommand("compare", "Relative error between two spectra");
  compare->add_option("reference", ca.a, "Reference spectrum CSV")->required();
  compare->add_option("candidate", ca.b, "Candidate spectrum CSV")->required();
  compare->add_option("--band", ca.band, "Frequency band lo:hi, e.g. 100e3:500e3");
  compare->add_option("-o,--output", ca.output, "JSON report");

  InvertArgs ia;
  auto* invert = app.add_subcommand("invert", "Fit sigma*D to a normalized spectrum");
  invert->add_option("spectrum", ia.spectrum, "Spectrum CSV")->required();
  invert->add_option("--alpha0", ia.alpha0, "Spatial frequency, 1/m (default: from file)")
      ->check(CLI::PositiveNumber);
  invert->add_flag("--fit-alpha0", ia.fit_alpha0, "Fit alpha0 as well");
  invert->add_option("-o,--output", ia.output, "JSON result");
  invert->add_option("--max-iterations", ia.max_iterations)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string out_dir = ".";
  auto* paper = app.add_subcommand("paper-cases", "Write the bundled reference scenarios");
  paper->add_option("--out-dir", out_dir, "Destination directory")->capture_default_str();

  std::vector<std::string> storage(args.begin(), args.end());
  if (storage.empty()) storage.emplace_back("eddyeq");
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*spectrum) return cmd_spectrum(sa, out, err);
    if (*equivalent) return cmd_equivalent(ea, out);
    if (*compare) return cmd_compare(ca, out);
    if (*invert) return cmd_invert(ia, out, err);
    if (*paper) return cmd_paper_cases(out_dir, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

} // namespace eddy
