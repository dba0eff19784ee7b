#include "eddy/analysis.hpp"

#include "eddy/errors.hpp"
#include "eddy/thin_plate.hpp"

#include <algorithm>
#include <cmath>

namespace eddy::analysis {

namespace {

using cplx = std::complex<double>;

void check_fit_input(const InductanceSpectrum& s, double alpha0) {
  s.validate();
  if (!s.normalized) {
    throw InvalidInput(
        "inversion needs a normalized (dL/L_air) thin-plate spectrum; this one is absolute");
  }
  if (s.size() < 3) {
    throw InvalidInput("inversion needs at least 3 frequencies");
  }
  if (std::all_of(s.delta_L.begin(), s.delta_L.end(), [](cplx v) { return v == cplx{}; })) {
    throw InvalidInput("inversion: spectrum is identically zero");
  }
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
    throw InvalidInput("inversion: alpha0 must be > 0");
  }
}

// model m = -X / (2 a + X), X = j w mu0 s
struct Derivs {
  cplx m;
  cplx d_sigma_d;
  cplx d_alpha0;
};

Derivs model_with_derivs(double omega, double sigma_d, double alpha0) {
  const cplx x(0.0, omega * kMu0 * sigma_d);
  const cplx den = 2.0 * alpha0 + x;
  const cplx den2 = den * den;
  return {-x / den, cplx(0.0, -omega * kMu0) * (2.0 * alpha0) / den2, 2.0 * x / den2};
}

double cost(const InductanceSpectrum& s, double sigma_d, double alpha0) {
  double c = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    c += std::norm(thin::thin_response(alpha0, angular(s.frequencies[i]), sigma_d) - s.delta_L[i]);
  }
  return c;
}

// Solve the (n x n, n <= 2) symmetric system A x = b.
std::array<double, 2> solve(const std::array<double, 4>& a, const std::array<double, 2>& b,
                            int n) {
  if (n == 1) return {b[0] / a[0], 0.0};
  const double det = a[0] * a[3] - a[1] * a[2];
  return {(a[3] * b[0] - a[1] * b[1]) / det, (a[0] * b[1] - a[2] * b[0]) / det};
}

} // namespace

Objective sigma_d_objective(const InductanceSpectrum& spectrum, double sigma_d, double alpha0) {
  Objective out;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const Derivs d = model_with_derivs(angular(spectrum.frequencies[i]), sigma_d, alpha0);
    const cplx r = d.m - spectrum.delta_L[i];
    out.value += std::norm(r);
    out.gradient[0] += 2.0 * (std::conj(r) * d.d_sigma_d).real();
    out.gradient[1] += 2.0 * (std::conj(r) * d.d_alpha0).real();
  }
  return out;
}

double initial_sigma_d_guess(const InductanceSpectrum& spectrum, double alpha0) {
  check_fit_input(spectrum, alpha0);
  double peak = 0.0;
  for (const cplx& v : spectrum.delta_L) peak = std::max(peak, std::abs(v));
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const cplx y = spectrum.delta_L[i];
    if (std::abs(y) < 1e-6 * peak) continue;
    const double w_mu = angular(spectrum.frequencies[i]) * kMu0;
    // invert y = -X / (2 alpha0 + X) for X = j w mu0 s at this one point
    const cplx s = cplx(0.0, 2.0 * alpha0) * y / ((1.0 + y) * w_mu);
    if (std::isfinite(s.real()) && s.real() > 0.0) return s.real();
    const double slope = -2.0 * alpha0 * y.imag() / w_mu;
    if (std::isfinite(slope) && slope > 0.0) return slope;
  }
  return 1.0;
}

SigmaDFit fit_sigma_d(const InductanceSpectrum& spectrum, double alpha0, bool fit_alpha0,
                      const FitOptions& options) {
  check_fit_input(spectrum, alpha0);
  const int n = fit_alpha0 ? 2 : 1;
  double data_norm2 = 0.0;
  for (const cplx& v : spectrum.delta_L) data_norm2 += std::norm(v);
  auto rel_norm = [&](double c) { return std::sqrt(c / data_norm2); };

  // Parameters are carried relative to their start values.
  const std::array<double, 2> scale{initial_sigma_d_guess(spectrum, alpha0), alpha0};
  std::array<double, 2> p = scale;
  double c = cost(spectrum, p[0], p[1]);

  SigmaDFit fit;
  fit.residual_history.push_back(rel_norm(c));
  double lambda = 1e-3;
  for (int it = 0; it < options.max_iterations; ++it) {
    fit.iterations = it + 1;
    if (c == 0.0) {
      fit.converged = true;
      break;
    }
    // normal equations in scaled parameters: J^T J and J^T r (real parts)
    std::array<double, 4> jtj{};
    std::array<double, 2> jtr{};
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
      const Derivs d = model_with_derivs(angular(spectrum.frequencies[i]), p[0], p[1]);
      const cplx r = d.m - spectrum.delta_L[i];
      const cplx col[2] = {d.d_sigma_d * scale[0], d.d_alpha0 * scale[1]};
      for (int a = 0; a < n; ++a) {
        jtr[a] += (std::conj(col[a]) * r).real();
        for (int b = 0; b < n; ++b) {
          jtj[a * 2 + b] += (std::conj(col[a]) * col[b]).real();
        }
      }
    }

    bool accepted = false;
    double step_size = 0.0;
    double new_c = c;
    while (lambda < 1e16) {
      std::array<double, 4> damped = jtj;
      for (int a = 0; a < n; ++a) {
        damped[a * 2 + a] += lambda * std::max(jtj[a * 2 + a], 1e-300);
      }
      const auto step = solve(damped, {-jtr[0], -jtr[1]}, n);
      std::array<double, 2> trial = p;
      step_size = 0.0;
      for (int a = 0; a < n; ++a) {
        trial[a] += step[a] * scale[a];
        step_size = std::max(step_size, std::abs(step[a] * scale[a]) / std::abs(p[a]));
      }
      const bool valid = trial[0] > 0.0 && trial[1] > 0.0 && std::isfinite(trial[0]) &&
                         std::isfinite(trial[1]);
      if (valid) {
        new_c = cost(spectrum, trial[0], trial[1]);
        if (new_c <= c) {
          p = trial;
          accepted = true;
          lambda = std::max(lambda / 10.0, 1e-12);
          break;
        }
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No descent direction left at any damping: the start point is a
      // minimum to working precision.
      fit.converged = true;
      break;
    }
    const double rel_change = (c - new_c) / c;
    c = new_c;
    fit.residual_history.push_back(rel_norm(c));
    if (step_size < 1e-9 || rel_change < 1e-12) {
      fit.converged = true;
      break;
    }
  }

  fit.sigma_d = p[0];
  if (fit_alpha0) fit.alpha0_fit = p[1];
  fit.residual_norm = rel_norm(c);
  return fit;
}

} // namespace eddy::analysis
