#include "eddy/analysis.hpp"
#include "eddy/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace eddy;
using cplx = std::complex<double>;

namespace {

InductanceSpectrum make(std::vector<double> f, std::vector<cplx> v, bool normalized = true) {
  InductanceSpectrum s;
  s.frequencies = std::move(f);
  s.delta_L = std::move(v);
  s.normalized = normalized;
  return s;
}

} // namespace

TEST_CASE("identical spectra compare to zero") {
  const auto a = make({1, 2, 3}, {{1, -1}, {0.5, -2}, {0.1, -0.1}});
  const auto r = analysis::compare(a, a);
  CHECK(r.max_rel_error == 0.0);
  for (double e : r.per_frequency_rel_error) CHECK(e == 0.0);
  CHECK(r.below_floor_count == 0);
}

TEST_CASE("relative error uses the first spectrum as reference") {
  const auto a = make({1, 2}, {{2, 0}, {0, -4}});
  const auto b = make({1, 2}, {{1, 0}, {0, -4}});
  const auto ab = analysis::compare(a, b);
  const auto ba = analysis::compare(b, a);
  CHECK(ab.per_frequency_rel_error[0] == doctest::Approx(0.5));
  CHECK(ba.per_frequency_rel_error[0] == doctest::Approx(1.0));
  // only the normalization changes: |a-b| is shared
  CHECK(ab.per_frequency_rel_error[0] * 2.0 == doctest::Approx(ba.per_frequency_rel_error[0] * 1.0));
  CHECK(ab.max_rel_error == doctest::Approx(0.5));
  CHECK(ab.max_rel_error_frequency == 1.0);
}

TEST_CASE("complex magnitude metric") {
  const auto a = make({1}, {{3, -4}});
  const auto b = make({1}, {{3, -4.5}});
  CHECK(analysis::compare(a, b).max_rel_error == doctest::Approx(0.1));
}

TEST_CASE("band filter") {
  const auto a = make({10, 100, 1000, 10000}, {{1, 0}, {1, 0}, {1, 0}, {1, 0}});
  const auto b = make({10, 100, 1000, 10000}, {{2, 0}, {1.1, 0}, {1.2, 0}, {5, 0}});
  const auto r = analysis::compare(a, b, analysis::FrequencyBand{100, 1000});
  CHECK(r.max_rel_error == doctest::Approx(0.2));
  CHECK(r.max_rel_error_frequency == 1000.0);
  CHECK(r.max_rel_error_band.lo == 100.0);
  CHECK(r.max_rel_error_band.hi == 1000.0);
  CHECK(r.excluded == std::vector<bool>{true, false, false, true});
  REQUIRE(r.band_filter.has_value());
  // per-frequency values are kept for excluded points
  CHECK(r.per_frequency_rel_error[3] == doctest::Approx(4.0));
  const auto all = analysis::compare(a, b);
  CHECK(all.max_rel_error == doctest::Approx(4.0));
  CHECK(all.max_rel_error_band.lo == 10.0);
  CHECK(all.max_rel_error_band.hi == 10000.0);
}

TEST_CASE("reference floor excludes near-zero references") {
  const auto a = make({1, 2, 3}, {{1, 0}, {1e-4, 0}, {0, 0}});
  const auto b = make({1, 2, 3}, {{1, 0}, {1, 0}, {1, 0}});
  const auto r = analysis::compare(a, b);
  CHECK(r.below_floor_count == 2);
  CHECK(r.max_rel_error == 0.0);
  CHECK(std::isinf(r.per_frequency_rel_error[2]));
  CHECK(r.excluded[1]);
}

TEST_CASE("mismatches are rejected") {
  const auto a = make({1, 2}, {{1, 0}, {1, 0}});
  CHECK_THROWS_AS(analysis::compare(a, make({1, 3}, {{1, 0}, {1, 0}})), InvalidInput);
  CHECK_THROWS_AS(analysis::compare(a, make({1}, {{1, 0}})), InvalidInput);
  CHECK_THROWS_AS(analysis::compare(a, make({1, 2}, {{1, 0}, {1, 0}}, false)), InvalidInput);
  CHECK_THROWS_AS(analysis::compare(a, a, analysis::FrequencyBand{5, 1}), InvalidInput);
  CHECK_THROWS_AS(analysis::compare(a, a, analysis::FrequencyBand{5, 9}), InvalidInput);
}

TEST_CASE("errors are never negative") {
  const auto a = make({1, 2, 3}, {{1, 2}, {-3, 0.5}, {0.2, -0.7}});
  const auto b = make({1, 2, 3}, {{0.9, 2}, {-3, 0.4}, {0.25, -0.7}});
  for (double e : analysis::compare(a, b).per_frequency_rel_error) CHECK(e >= 0.0);
}
