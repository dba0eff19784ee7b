#include "eddy/analysis.hpp"

#include "eddy/errors.hpp"
#include "eddy/thin_plate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

namespace eddy::analysis {

namespace {

struct PointResult {
  std::complex<double> value;
  bool flag = false;
  int refinements = 0;
};

[[noreturn]] void rethrow_annotated(std::exception_ptr error, double frequency) {
  std::ostringstream prefix;
  prefix.precision(17);
  prefix << "at f = " << frequency << " Hz: ";
  try {
    std::rethrow_exception(error);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(prefix.str() + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(prefix.str() + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(prefix.str() + e.what());
  }
}

// Evaluate `point(i)` for every index with a fixed-size worker pool. The
// lowest failing index wins so the reported error does not depend on timing.
template <class F>
std::vector<PointResult> evaluate_all(const std::vector<double>& freqs, unsigned threads,
                                      F&& point) {
  const std::size_t n = freqs.size();
  std::vector<PointResult> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        out[i] = point(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) rethrow_annotated(errors[i], freqs[i]);
  }
  return out;
}

SweepReport assemble(const std::vector<double>& freqs, const std::vector<PointResult>& points,
                     ModelKind model) {
  SweepReport report;
  report.spectrum.frequencies = freqs;
  report.spectrum.model = model;
  report.spectrum.normalized = model == ModelKind::thin_plate;
  report.spectrum.delta_L.reserve(points.size());
  for (const PointResult& p : points) {
    report.spectrum.delta_L.push_back(p.value);
    report.max_refinements = std::max(report.max_refinements, p.refinements);
    if (model == ModelKind::thin_plate) {
      report.outside_thin_regime = report.outside_thin_regime || p.flag;
    } else {
      report.truncation_warning = report.truncation_warning || p.flag;
    }
  }
  return report;
}

} // namespace

SweepReport run_sweep(const dd::Solver& solver, const Plate& plate, const SweepSpec& spec,
                      unsigned threads) {
  plate.validate();
  const std::vector<double> freqs = frequency_grid(spec);
  // Level 0 and 1 are needed by every adaptive evaluation; build them before
  // the workers start.
  solver.prepare(solver.quadrature().rule == dd::QuadratureRule::adaptive ? 2 : 1);
  auto points = evaluate_all(freqs, threads, [&](std::size_t i) {
    const dd::DeltaLResult r = solver.evaluate(plate, angular(freqs[i]));
    return PointResult{r.value, r.truncation_warning, r.refinements};
  });
  return assemble(freqs, points, ModelKind::dodd_deeds);
}

SweepReport run_sweep(ModelKind model, const CoilPair& coil, const Plate& plate,
                      const SweepSpec& spec, const SweepOptions& options) {
  coil.validate();
  plate.validate();
  if (model == ModelKind::dodd_deeds) {
    if (!options.quadrature) {
      throw InvalidInput("sweep: dodd_deeds needs a quadrature spec");
    }
    const dd::Solver solver(coil, *options.quadrature);
    return run_sweep(solver, plate, spec, options.threads);
  }
  if (options.quadrature) {
    throw InvalidInput("sweep: thin_plate takes no quadrature spec");
  }
  const double alpha0 = options.alpha0 ? *options.alpha0 : derive_alpha0(coil).alpha0;
  if (!(alpha0 > 0.0)) {
    throw InvalidInput("sweep: alpha0 must be > 0");
  }
  const std::vector<double> freqs = frequency_grid(spec);
  auto points = evaluate_all(freqs, options.threads, [&](std::size_t i) {
    const thin::ThinPlateResponse r = thin::normalized_response_thin(alpha0, angular(freqs[i]), plate);
    return PointResult{r.value, r.outside_thin_regime, 0};
  });
  SweepReport report = assemble(freqs, points, ModelKind::thin_plate);
  report.alpha0 = alpha0;
  return report;
}

} // namespace eddy::analysis
