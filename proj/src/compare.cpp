#include "eddy/analysis.hpp"

#include "eddy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eddy::analysis {

namespace {

bool same_frequency(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

} // namespace

EquivalenceReport compare(const InductanceSpectrum& a, const InductanceSpectrum& b,
                          std::optional<FrequencyBand> band) {
  a.validate();
  b.validate();
  if (a.size() != b.size() ||
      !std::equal(a.frequencies.begin(), a.frequencies.end(), b.frequencies.begin(),
                  same_frequency)) {
    throw InvalidInput("compare: frequency grids differ");
  }
  if (a.normalized != b.normalized) {
    throw InvalidInput("compare: one spectrum is normalized and the other is absolute");
  }
  if (band && !(band->lo <= band->hi)) {
    throw InvalidInput("compare: band lower edge exceeds upper edge");
  }

  double peak = 0.0;
  for (const auto& v : a.delta_L) peak = std::max(peak, std::abs(v));
  const double floor = kReferenceFloor * peak;

  EquivalenceReport report;
  report.band_filter = band;
  report.frequencies = a.frequencies;
  report.per_frequency_rel_error.resize(a.size());
  report.excluded.assign(a.size(), false);

  bool any = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ref = std::abs(a.delta_L[i]);
    const double diff = std::abs(a.delta_L[i] - b.delta_L[i]);
    double err = 0.0;
    if (diff != 0.0) {
      err = ref > 0.0 ? diff / ref : std::numeric_limits<double>::infinity();
    }
    report.per_frequency_rel_error[i] = err;

    const double f = a.frequencies[i];
    if (band && (f < band->lo || f > band->hi)) {
      report.excluded[i] = true;
      continue;
    }
    if (ref < floor) {
      report.excluded[i] = true;
      ++report.below_floor_count;
      continue;
    }
    if (!any) {
      report.max_rel_error_band = {f, f};
    }
    report.max_rel_error_band.hi = f;
    if (!any || err > report.max_rel_error) {
      report.max_rel_error = err;
      report.max_rel_error_frequency = f;
    }
    any = true;
  }
  if (!any && band) {
    throw InvalidInput("compare: no usable frequency inside the band");
  }
  return report;
}

} // namespace eddy::analysis
