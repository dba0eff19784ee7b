#include "eddy/simd/slab_kernels.hpp"

namespace eddy::simd::detail {

void batch_scalar(const double* alpha, std::size_t n, const te::SlabParams& slab,
                  std::complex<double>* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = te::slab_reflection(alpha[i], slab);
  }
}

std::complex<double> sum_scalar(const double* alpha, const double* weight, std::size_t n,
                                const te::SlabParams& slab) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> r = te::slab_reflection(alpha[i], slab);
    re += weight[i] * r.real();
    im += weight[i] * r.imag();
  }
  return {re, im};
}

} // namespace eddy::simd::detail
