// AVX2 + FMA slab-reflection kernel. This translation unit is the only one
// compiled with -mavx2 -mfma; it is reached through the runtime dispatcher.

#include "eddy/simd/slab_kernels.hpp"

#include <immintrin.h>

#include <cstdint>

namespace eddy::simd::detail {

namespace {

using v4 = __m256d;

inline v4 set1(double x) { return _mm256_set1_pd(x); }
inline v4 add(v4 a, v4 b) { return _mm256_add_pd(a, b); }
inline v4 sub(v4 a, v4 b) { return _mm256_sub_pd(a, b); }
inline v4 mul(v4 a, v4 b) { return _mm256_mul_pd(a, b); }
inline v4 div(v4 a, v4 b) { return _mm256_div_pd(a, b); }
inline v4 fma(v4 a, v4 b, v4 c) { return _mm256_fmadd_pd(a, b, c); }
inline v4 neg(v4 a) { return _mm256_xor_pd(a, set1(-0.0)); }

struct cv4 {
  v4 re;
  v4 im;
};

inline cv4 cmul(cv4 a, cv4 b) {
  return {sub(mul(a.re, b.re), mul(a.im, b.im)), add(mul(a.re, b.im), mul(a.im, b.re))};
}

inline cv4 cdiv(cv4 a, cv4 b) {
  const v4 inv = div(set1(1.0), add(mul(b.re, b.re), mul(b.im, b.im)));
  return {mul(add(mul(a.re, b.re), mul(a.im, b.im)), inv),
          mul(sub(mul(a.im, b.re), mul(a.re, b.im)), inv)};
}

// round-to-nearest integer of `k` (|k| < 2^51) as int64 lanes
constexpr double kMagic = 6755399441055744.0; // 2^52 + 2^51

inline __m256i to_int64(v4 k) {
  return _mm256_sub_epi64(_mm256_castpd_si256(add(k, set1(kMagic))),
                          _mm256_castpd_si256(set1(kMagic)));
}

// exp(x) - 1 for x in [-745, 0]; callers clamp.
inline v4 expm1_v(v4 x) {
  const v4 n = _mm256_round_pd(mul(x, set1(1.4426950408889634)),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  v4 r = fma(n, set1(-6.93145751953125e-1), x);
  r = fma(n, set1(-1.42860682030941723212e-6), r);
  // e^r - 1 = r (1 + r/2 + r^2/6 + ...), |r| <= ln2/2, degree 13
  v4 p = set1(1.0 / 6227020800.0);
  p = fma(p, r, set1(1.0 / 479001600.0));
  p = fma(p, r, set1(1.0 / 39916800.0));
  p = fma(p, r, set1(1.0 / 3628800.0));
  p = fma(p, r, set1(1.0 / 362880.0));
  p = fma(p, r, set1(1.0 / 40320.0));
  p = fma(p, r, set1(1.0 / 5040.0));
  p = fma(p, r, set1(1.0 / 720.0));
  p = fma(p, r, set1(1.0 / 120.0));
  p = fma(p, r, set1(1.0 / 24.0));
  p = fma(p, r, set1(1.0 / 6.0));
  p = fma(p, r, set1(0.5));
  p = fma(p, r, set1(1.0));
  p = mul(p, r);
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(to_int64(n), _mm256_set1_epi64x(1023)), 52);
  const v4 scale = _mm256_castsi256_pd(bits);
  return add(mul(scale, p), sub(scale, set1(1.0)));
}

// sin and cos for moderate |t| (quadrant reduction with a two-part pi/2).
inline void sincos_v(v4 t, v4& s_out, v4& c_out) {
  const v4 k = _mm256_round_pd(mul(t, set1(0.63661977236758134308)),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  v4 r = fma(k, set1(-1.57079632673412561417e+00), t);
  r = fma(k, set1(-6.07710050650619224932e-11), r);
  const v4 z = mul(r, r);

  v4 ps = set1(1.58969099521155010221e-10);
  ps = fma(ps, z, set1(-2.50507602534068634195e-08));
  ps = fma(ps, z, set1(2.75573137070700676789e-06));
  ps = fma(ps, z, set1(-1.98412698298579493134e-04));
  ps = fma(ps, z, set1(8.33333333332248946124e-03));
  ps = fma(ps, z, set1(-1.66666666666666324348e-01));
  const v4 sin_r = fma(mul(ps, z), r, r);

  v4 pc = set1(-1.13596475577881948265e-11);
  pc = fma(pc, z, set1(2.08757232129817482790e-09));
  pc = fma(pc, z, set1(-2.75573143513906633035e-07));
  pc = fma(pc, z, set1(2.48015872894767294178e-05));
  pc = fma(pc, z, set1(-1.38888888888741095749e-03));
  pc = fma(pc, z, set1(4.16666666666666019037e-02));
  const v4 cos_r = sub(set1(1.0), sub(mul(set1(0.5), z), mul(mul(z, z), pc)));

  const __m256i q = to_int64(k);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const v4 swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const v4 sin_neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, two), two));
  const v4 cos_neg = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), two));
  const v4 s = _mm256_blendv_pd(sin_r, cos_r, swap);
  const v4 c = _mm256_blendv_pd(cos_r, sin_r, swap);
  const v4 sign = set1(-0.0);
  s_out = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign));
  c_out = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign));
}

struct SlabConstants {
  v4 q;
  v4 m;
  v4 m_minus_1;
  v4 four_m;
  v4 two_d;
};

inline SlabConstants constants(const te::SlabParams& slab) {
  return {set1(slab.q), set1(slab.mu_ratio), set1(slab.mu_ratio - 1.0),
          set1(4.0 * slab.mu_ratio), set1(2.0 * slab.thickness)};
}

// Mirrors te::slab_reflection lane-wise.
inline cv4 reflect(v4 a, const SlabConstants& c) {
  const v4 a2 = mul(a, a);
  const v4 modulus = _mm256_sqrt_pd(fma(a2, a2, mul(c.q, c.q)));
  const v4 k2r = _mm256_sqrt_pd(mul(set1(0.5), add(modulus, a2)));
  const v4 k2i = div(c.q, add(k2r, k2r));
  const cv4 k2{k2r, k2i};

  const cv4 s{fma(c.m, a, k2r), k2i};
  // j q / (k2 + a)
  const v4 tr = add(k2r, a);
  const v4 inv_t = div(set1(1.0), fma(tr, tr, mul(k2i, k2i)));
  const v4 jq_re = mul(mul(c.q, k2i), inv_t);
  const v4 jq_im = mul(mul(c.q, tr), inv_t);
  const cv4 num{sub(mul(c.m_minus_1, a), jq_re), neg(jq_im)};
  const cv4 r12 = cdiv(num, s);

  const v4 x_raw = neg(mul(c.two_d, k2r));
  const v4 half_space = _mm256_cmp_pd(x_raw, set1(-te::kHalfSpaceExponent), _CMP_LT_OQ);
  const v4 x = _mm256_max_pd(x_raw, set1(-te::kHalfSpaceExponent));
  const v4 y = _mm256_max_pd(neg(mul(c.two_d, k2i)), set1(-te::kHalfSpaceExponent));

  const v4 em1 = expm1_v(x);
  v4 sh;
  v4 ch;
  sincos_v(mul(set1(0.5), y), sh, ch);
  const v4 two_sh2 = mul(add(sh, sh), sh);
  const v4 sin_y = mul(add(sh, sh), ch);
  const v4 cos_y = sub(set1(1.0), two_sh2);
  // 1 - e = -expm1(-2 k2 D)
  const cv4 ome{neg(sub(mul(em1, cos_y), two_sh2)), neg(mul(add(em1, set1(1.0)), sin_y))};
  const cv4 e{sub(set1(1.0), ome.re), neg(ome.im)};

  const cv4 s2 = cmul(s, s);
  cv4 w = cdiv(k2, s2);
  const v4 scale = mul(c.four_m, a);
  w = {mul(w.re, scale), mul(w.im, scale)};
  const cv4 ew = cmul(e, w);
  const cv4 den{add(ome.re, ew.re), add(ome.im, ew.im)};
  const cv4 out = cdiv(cmul(r12, ome), den);
  return {_mm256_blendv_pd(out.re, r12.re, half_space),
          _mm256_blendv_pd(out.im, r12.im, half_space)};
}

inline bool trivially_zero(const te::SlabParams& slab) {
  return slab.q == 0.0 && slab.mu_ratio == 1.0;
}

} // namespace

void batch_avx2(const double* alpha, std::size_t n, const te::SlabParams& slab,
                std::complex<double>* out) {
  if (trivially_zero(slab)) {
    for (std::size_t i = 0; i < n; ++i) out[i] = {0.0, 0.0};
    return;
  }
  const SlabConstants c = constants(slab);
  std::size_t i = 0;
  alignas(32) double re[4];
  alignas(32) double im[4];
  for (; i + 4 <= n; i += 4) {
    const cv4 r = reflect(_mm256_loadu_pd(alpha + i), c);
    _mm256_store_pd(re, r.re);
    _mm256_store_pd(im, r.im);
    for (int l = 0; l < 4; ++l) out[i + l] = {re[l], im[l]};
  }
  if (i < n) {
    alignas(32) double a[4] = {1.0, 1.0, 1.0, 1.0};
    const std::size_t rest = n - i;
    for (std::size_t l = 0; l < rest; ++l) a[l] = alpha[i + l];
    const cv4 r = reflect(_mm256_load_pd(a), c);
    _mm256_store_pd(re, r.re);
    _mm256_store_pd(im, r.im);
    for (std::size_t l = 0; l < rest; ++l) out[i + l] = {re[l], im[l]};
  }
}

std::complex<double> sum_avx2(const double* alpha, const double* weight, std::size_t n,
                              const te::SlabParams& slab) {
  if (trivially_zero(slab)) {
    return {0.0, 0.0};
  }
  const SlabConstants c = constants(slab);
  v4 acc_re = _mm256_setzero_pd();
  v4 acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const cv4 r = reflect(_mm256_loadu_pd(alpha + i), c);
    const v4 w = _mm256_loadu_pd(weight + i);
    acc_re = fma(w, r.re, acc_re);
    acc_im = fma(w, r.im, acc_im);
  }
  if (i < n) {
    alignas(32) double a[4] = {1.0, 1.0, 1.0, 1.0};
    alignas(32) double w[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t l = 0; i + l < n; ++l) {
      a[l] = alpha[i + l];
      w[l] = weight[i + l];
    }
    const cv4 r = reflect(_mm256_load_pd(a), c);
    const v4 wv = _mm256_load_pd(w);
    acc_re = fma(wv, r.re, acc_re);
    acc_im = fma(wv, r.im, acc_im);
  }
  alignas(32) double re[4];
  alignas(32) double im[4];
  _mm256_store_pd(re, acc_re);
  _mm256_store_pd(im, acc_im);
  return {(re[0] + re[1]) + (re[2] + re[3]), (im[0] + im[1]) + (im[2] + im[3])};
}

} // namespace eddy::simd::detail
