#include "eddy/analysis.hpp"
#include "eddy/errors.hpp"
#include "eddy/thin_plate.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace eddy;
using cplx = std::complex<double>;

namespace {

constexpr double kAlpha0 = 1.0 / 0.006;
constexpr double kSigmaD = 33488.0; // 59.8 MS/m x 0.56 mm

// Corner of the thin response, where w mu0 sigma D = 2 alpha0.
double corner_hz(double sigma_d, double alpha0) { return alpha0 / (std::numbers::pi * kMu0 * sigma_d); }

InductanceSpectrum synthetic(double sigma_d, double alpha0, std::size_t n, double f_min, double f_max) {
  InductanceSpectrum s;
  s.normalized = true;
  s.model = ModelKind::thin_plate;
  s.frequencies = frequency_grid({f_min, f_max, n, Spacing::logarithmic});
  for (double f : s.frequencies) s.delta_L.push_back(thin::thin_response(alpha0, angular(f), sigma_d));
  return s;
}

// Two decades either side of the corner: the band that carries sigma*D.
InductanceSpectrum synthetic(double sigma_d, double alpha0, std::size_t n = 40) {
  const double fc = corner_hz(sigma_d, alpha0);
  return synthetic(sigma_d, alpha0, n, fc / 100.0, fc * 100.0);
}

InductanceSpectrum with_noise(InductanceSpectrum s, std::uint64_t seed, double level) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, level / std::sqrt(2.0));
  for (cplx& v : s.delta_L) v *= cplx(1.0 + n(rng), n(rng));
  return s;
}

} // namespace

TEST_CASE("copper corner sits near 1.26 kHz") {
  CHECK(corner_hz(kSigmaD, kAlpha0) == doctest::Approx(1260.67).epsilon(1e-4));
}

TEST_CASE("noiseless round trip") {
  for (double sd : {1e2, 738.0, kSigmaD, 1e5}) {
    const auto fit = analysis::fit_sigma_d(synthetic(sd, kAlpha0), kAlpha0, false);
    CHECK(fit.converged);
    CHECK(fit.sigma_d == doctest::Approx(sd).epsilon(1e-6));
    CHECK(fit.residual_norm < 1e-12);
    CHECK_FALSE(fit.alpha0_fit.has_value());
  }
}

TEST_CASE("1% multiplicative noise, 100 seeds") {
  const auto clean = synthetic(kSigmaD, kAlpha0);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto fit = analysis::fit_sigma_d(with_noise(clean, seed, 0.01), kAlpha0, false);
    CHECK(fit.converged);
    worst = std::max(worst, std::abs(fit.sigma_d / kSigmaD - 1.0));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("residual history never increases") {
  const auto noisy = with_noise(synthetic(kSigmaD, kAlpha0), 17, 0.05);
  const auto fit = analysis::fit_sigma_d(noisy, kAlpha0, true);
  REQUIRE(fit.residual_history.size() >= 1);
  for (std::size_t i = 1; i < fit.residual_history.size(); ++i) {
    CHECK(fit.residual_history[i] <= fit.residual_history[i - 1]);
  }
  CHECK(fit.residual_history.back() == fit.residual_norm);
  CHECK(fit.sigma_d > 0.0);
}

TEST_CASE("a global phase rotation shows up in the residual") {
  const auto clean = synthetic(kSigmaD, kAlpha0);
  const double base = analysis::fit_sigma_d(clean, kAlpha0, false).residual_norm;
  for (double theta : {0.02, 0.2, 1.0}) {
    auto rotated = clean;
    for (cplx& v : rotated.delta_L) v *= std::polar(1.0, theta);
    const auto fit = analysis::fit_sigma_d(rotated, kAlpha0, false);
    CHECK(fit.residual_norm > base);
    CHECK(fit.residual_norm > 0.1 * std::sin(theta / 2.0));
  }
}

TEST_CASE("objective gradient matches central differences") {
  const auto data = with_noise(synthetic(kSigmaD, kAlpha0), 3, 0.01);
  for (double ds : {0.99, 1.0, 1.013}) {
    for (double da : {0.995, 1.0, 1.02}) {
      const double s = kSigmaD * ds;
      const double a = kAlpha0 * da;
      const auto obj = analysis::sigma_d_objective(data, s, a);
      const double hs = 1e-5 * s;
      const double ha = 1e-5 * a;
      const double gs = (analysis::sigma_d_objective(data, s + hs, a).value -
                         analysis::sigma_d_objective(data, s - hs, a).value) / (2.0 * hs);
      const double ga = (analysis::sigma_d_objective(data, s, a + ha).value -
                         analysis::sigma_d_objective(data, s, a - ha).value) / (2.0 * ha);
      const double scale_s = std::max(std::abs(gs), 1e-3 * obj.value / s);
      const double scale_a = std::max(std::abs(ga), 1e-3 * obj.value / a);
      CHECK(std::abs(obj.gradient[0] - gs) <= 1e-6 * scale_s);
      CHECK(std::abs(obj.gradient[1] - ga) <= 1e-6 * scale_a);
    }
  }
}

TEST_CASE("initial guess lands within a factor of two") {
  for (int i = 0; i <= 30; ++i) {
    const double sd = 1e2 * std::pow(1e3, i / 30.0);
    const double g = analysis::initial_sigma_d_guess(synthetic(sd, kAlpha0), kAlpha0);
    CHECK(g > sd / 2.0);
    CHECK(g < sd * 2.0);
  }
}

TEST_CASE("initial guess tends to the low-frequency slope law") {
  // Im(s)/w -> -mu0 sigma D / (2 alpha0)
  const auto s = synthetic(kSigmaD, kAlpha0, 5, 1e-2, 1.0);
  const double slope = -2.0 * kAlpha0 * s.delta_L[0].imag() / (angular(s.frequencies[0]) * kMu0);
  CHECK(slope == doctest::Approx(kSigmaD).epsilon(1e-6));
  CHECK(analysis::initial_sigma_d_guess(s, kAlpha0) == doctest::Approx(slope).epsilon(1e-6));
}

TEST_CASE("fitting alpha0 from the true value keeps it") {
  const auto fit = analysis::fit_sigma_d(synthetic(kSigmaD, kAlpha0), kAlpha0, true);
  CHECK(fit.converged);
  REQUIRE(fit.alpha0_fit.has_value());
  CHECK(*fit.alpha0_fit == doctest::Approx(kAlpha0).epsilon(1e-4));
  CHECK(fit.sigma_d == doctest::Approx(kSigmaD).epsilon(1e-6));
}

TEST_CASE("with alpha0 free only sigma*D / alpha0 is identified") {
  const auto fit = analysis::fit_sigma_d(synthetic(kSigmaD, kAlpha0), 1.5 * kAlpha0, true);
  REQUIRE(fit.alpha0_fit.has_value());
  CHECK(fit.sigma_d / *fit.alpha0_fit == doctest::Approx(kSigmaD / kAlpha0).epsilon(1e-6));
  CHECK(fit.residual_norm < 1e-9);
}

TEST_CASE("non-convergence keeps the best iterate") {
  const auto noisy = with_noise(synthetic(kSigmaD, kAlpha0), 5, 0.2);
  analysis::FitOptions opts;
  opts.max_iterations = 1;
  const auto fit = analysis::fit_sigma_d(noisy, 2.0 * kAlpha0, true, opts);
  CHECK_FALSE(fit.converged);
  CHECK(fit.iterations == 1);
  CHECK(fit.residual_norm <= fit.residual_history.front());
}

TEST_CASE("input checks") {
  auto abs_spec = synthetic(kSigmaD, kAlpha0);
  abs_spec.normalized = false;
  CHECK_THROWS_AS(analysis::fit_sigma_d(abs_spec, kAlpha0, false), InvalidInput);
  CHECK_THROWS_AS(analysis::fit_sigma_d(synthetic(kSigmaD, kAlpha0, 2), kAlpha0, false), InvalidInput);
  auto zero = synthetic(kSigmaD, kAlpha0);
  for (cplx& v : zero.delta_L) v = 0.0;
  CHECK_THROWS_AS(analysis::fit_sigma_d(zero, kAlpha0, false), InvalidInput);
  CHECK_THROWS_AS(analysis::fit_sigma_d(synthetic(kSigmaD, kAlpha0), 0.0, false), InvalidInput);
}
