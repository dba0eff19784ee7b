#include "eddy/errors.hpp"
#include "eddy/simd/slab_kernels.hpp"
#include "eddy/te_layered.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace eddy;
using cplx = std::complex<double>;

namespace {

struct Case {
  std::vector<double> alpha;
  std::vector<double> weight;
  te::SlabParams slab;
};

Case random_case(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Case c;
  const Plate p{1e5 * std::pow(1e3, u(rng)), u(rng) < 0.2 ? 1.0 + 200.0 * u(rng) : 1.0,
                1e-6 * std::pow(1e4, u(rng))};
  c.slab = te::make_slab_params(angular(std::pow(10.0, 7.0 * u(rng))), p);
  for (std::size_t i = 0; i < n; ++i) {
    c.alpha.push_back(std::pow(10.0, -3.0 + 8.0 * u(rng)));
    c.weight.push_back(u(rng) - 0.3);
  }
  return c;
}

} // namespace

TEST_CASE("backend names and availability") {
  CHECK(simd::to_string(simd::Backend::scalar) == "scalar");
  CHECK(simd::to_string(simd::Backend::avx2) == "avx2");
  CHECK(simd::backend_available(simd::Backend::scalar));
}

TEST_CASE("scalar batch is the reference kernel") {
  std::mt19937_64 rng(1);
  const Case c = random_case(rng, 37);
  std::vector<cplx> out(c.alpha.size());
  simd::slab_reflection_batch(simd::Backend::scalar, c.alpha, c.slab, out);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == te::slab_reflection(c.alpha[i], c.slab));
}

TEST_CASE("avx2 kernels reproduce the scalar reference") {
  if (!simd::backend_available(simd::Backend::avx2)) {
    MESSAGE("avx2 not available; skipped");
    return;
  }
  std::mt19937_64 rng(42);
  double worst_batch = 0.0;
  double worst_sum = 0.0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = static_cast<std::size_t>(trial % 23);
    const Case c = random_case(rng, n);
    std::vector<cplx> ref(n);
    std::vector<cplx> vec(n);
    simd::slab_reflection_batch(simd::Backend::scalar, c.alpha, c.slab, ref);
    simd::slab_reflection_batch(simd::Backend::avx2, c.alpha, c.slab, vec);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(ref[i]);
      const double err = std::abs(vec[i] - ref[i]);
      worst_batch = std::max(worst_batch, mag > 0 ? err / mag : err);
      scale += std::abs(c.weight[i]) * mag;
    }
    const cplx s_ref = simd::slab_reflection_sum(simd::Backend::scalar, c.alpha, c.weight, c.slab);
    const cplx s_vec = simd::slab_reflection_sum(simd::Backend::avx2, c.alpha, c.weight, c.slab);
    if (scale > 0) worst_sum = std::max(worst_sum, std::abs(s_vec - s_ref) / scale);
  }
  CHECK(worst_batch < 1e-12);
  CHECK(worst_sum < 1e-13);
}

TEST_CASE("avx2 kernels handle the special slabs") {
  if (!simd::backend_available(simd::Backend::avx2)) return;
  const std::vector<double> alpha{1e-3, 1.0, 166.0, 5e3, 4e4};
  std::vector<cplx> out(alpha.size());
  // vacuum: exactly zero
  simd::slab_reflection_batch(simd::Backend::avx2, alpha, te::SlabParams{0.0, 1.0, 1e-3}, out);
  for (const cplx& v : out) CHECK(v == cplx(0.0, 0.0));
  // half-space cutoff and very thin slabs
  for (double d : {1.0, 1e-9}) {
    const te::SlabParams slab{7.5e8, 1.0, d};
    simd::slab_reflection_batch(simd::Backend::avx2, alpha, slab, out);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      const cplx ref = te::slab_reflection(alpha[i], slab);
      CHECK(std::abs(out[i] - ref) <= 1e-12 * std::abs(ref));
    }
  }
}

TEST_CASE("avx2 sum is deterministic") {
  if (!simd::backend_available(simd::Backend::avx2)) return;
  std::mt19937_64 rng(8);
  const Case c = random_case(rng, 1001);
  const cplx a = simd::slab_reflection_sum(simd::Backend::avx2, c.alpha, c.weight, c.slab);
  for (int i = 0; i < 5; ++i) {
    CHECK(simd::slab_reflection_sum(simd::Backend::avx2, c.alpha, c.weight, c.slab) == a);
  }
}

TEST_CASE("backend override") {
  const simd::Backend before = simd::active_backend();
  simd::set_backend(simd::Backend::scalar);
  CHECK(simd::active_backend() == simd::Backend::scalar);
  std::mt19937_64 rng(4);
  const Case c = random_case(rng, 9);
  CHECK(simd::slab_reflection_sum(c.alpha, c.weight, c.slab) ==
        simd::slab_reflection_sum(simd::Backend::scalar, c.alpha, c.weight, c.slab));
  if (!simd::backend_available(simd::Backend::avx2)) {
    CHECK_THROWS_AS(simd::set_backend(simd::Backend::avx2), InvalidInput);
  }
  simd::set_backend(before);
}

TEST_CASE("span length mismatch") {
  const std::vector<double> a{1.0, 2.0};
  const std::vector<double> w{1.0};
  std::vector<cplx> out(3);
  CHECK_THROWS_AS(simd::slab_reflection_sum(a, w, te::SlabParams{1.0, 1.0, 1e-3}), InvalidInput);
  CHECK_THROWS_AS(simd::slab_reflection_batch(a, te::SlabParams{1.0, 1.0, 1e-3}, out), InvalidInput);
}
