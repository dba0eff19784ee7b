#pragma once

// Batched slab-reflection kernels. The scalar backend loops over
// te::slab_reflection; vector backends must reproduce it to ~1e-13 relative.
// The backend is picked once from CPU features; EDDY_SIMD=scalar forces the
// reference path.

#include "eddy/te_layered.hpp"

#include <complex>
#include <span>
#include <string_view>

namespace eddy::simd {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend backend);

/// True when the backend was compiled in and the CPU supports it.
bool backend_available(Backend backend);

Backend active_backend();

/// Override the automatic choice. Throws InvalidInput if unavailable.
void set_backend(Backend backend);

/// out[i] = R~(alpha[i]) for the given slab. Spans must have equal length.
void slab_reflection_batch(std::span<const double> alpha, const te::SlabParams& slab,
                           std::span<std::complex<double>> out);

/// sum_i weight[i] * R~(alpha[i]).
std::complex<double> slab_reflection_sum(std::span<const double> alpha,
                                         std::span<const double> weight,
                                         const te::SlabParams& slab);

// Explicit-backend entry points, used by the dispatcher and equivalence tests.
void slab_reflection_batch(Backend backend, std::span<const double> alpha,
                           const te::SlabParams& slab, std::span<std::complex<double>> out);
std::complex<double> slab_reflection_sum(Backend backend, std::span<const double> alpha,
                                         std::span<const double> weight,
                                         const te::SlabParams& slab);

namespace detail {

void batch_scalar(const double* alpha, std::size_t n, const te::SlabParams& slab,
                  std::complex<double>* out);
std::complex<double> sum_scalar(const double* alpha, const double* weight, std::size_t n,
                                const te::SlabParams& slab);

#if defined(EDDY_HAVE_AVX2)
void batch_avx2(const double* alpha, std::size_t n, const te::SlabParams& slab,
                std::complex<double>* out);
std::complex<double> sum_avx2(const double* alpha, const double* weight, std::size_t n,
                              const te::SlabParams& slab);
#endif

} // namespace detail

} // namespace eddy::simd
