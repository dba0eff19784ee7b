#include "eddy/errors.hpp"
#include "eddy/simd/slab_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

namespace eddy::simd {

namespace {

bool cpu_has_avx2() {
#if defined(EDDY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("EDDY_SIMD")) {
    if (std::string_view(env) == "scalar") return Backend::scalar;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw InvalidInput("slab kernel: span lengths differ");
  }
}

} // namespace

std::string_view to_string(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_available(Backend backend) {
  return backend == Backend::scalar || cpu_has_avx2();
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw InvalidInput("SIMD backend '" + std::string(to_string(backend)) +
                       "' is not available on this machine");
  }
  current().store(backend, std::memory_order_relaxed);
}

void slab_reflection_batch(Backend backend, std::span<const double> alpha,
                           const te::SlabParams& slab, std::span<std::complex<double>> out) {
  check_lengths(alpha.size(), out.size());
#if defined(EDDY_HAVE_AVX2)
  if (backend == Backend::avx2) {
    detail::batch_avx2(alpha.data(), alpha.size(), slab, out.data());
    return;
  }
#endif
  (void)backend;
  detail::batch_scalar(alpha.data(), alpha.size(), slab, out.data());
}

std::complex<double> slab_reflection_sum(Backend backend, std::span<const double> alpha,
                                         std::span<const double> weight,
                                         const te::SlabParams& slab) {
  check_lengths(alpha.size(), weight.size());
#if defined(EDDY_HAVE_AVX2)
  if (backend == Backend::avx2) {
    return detail::sum_avx2(alpha.data(), weight.data(), alpha.size(), slab);
  }
#endif
  (void)backend;
  return detail::sum_scalar(alpha.data(), weight.data(), alpha.size(), slab);
}

void slab_reflection_batch(std::span<const double> alpha, const te::SlabParams& slab,
                           std::span<std::complex<double>> out) {
  slab_reflection_batch(active_backend(), alpha, slab, out);
}

std::complex<double> slab_reflection_sum(std::span<const double> alpha,
                                         std::span<const double> weight,
                                         const te::SlabParams& slab) {
  return slab_reflection_sum(active_backend(), alpha, weight, slab);
}

} // namespace eddy::simd
