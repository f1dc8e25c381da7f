// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

// AVX2+FMA variants of the inner loops. Compiled with -mavx2 -mfma; only
// dispatched to when the running CPU reports both features.

#include "opnb/kern/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace opnb::kern {
namespace {

// exp saturation range shared with the scalar tails. Below the lower bound
// the result is flushed to zero; above the upper bound it is clamped so no
// lane produces an infinity.
constexpr double kExpLo = -708.25;
constexpr double kExpHi = 709.0;

inline double exp_sat(double x) {
  if (x < kExpLo) return 0.0;
  if (x > kExpHi) x = kExpHi;
  return std::exp(x);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

// Vectorized exp, Cody-Waite range reduction plus the classic rational
// polynomial for e^r on [-ln2/2, ln2/2]. ~2 ulp over the saturation range.
inline __m256d exp4(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

  const __m256d lo = _mm256_set1_pd(kExpLo);
  const __m256d hi = _mm256_set1_pd(kExpHi);
  const __m256d zero_mask = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);

  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d px = _mm256_fmadd_pd(p0, rr, p1);
  px = _mm256_fmadd_pd(px, rr, p2);
  px = _mm256_mul_pd(px, r);
  __m256d qx = _mm256_fmadd_pd(q0, rr, q1);
  qx = _mm256_fmadd_pd(qx, rr, q2);
  qx = _mm256_fmadd_pd(qx, rr, q3);
  const __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  __m256d y = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  // scale by 2^n through the exponent bits; n is in [-1022, 1023] here
  __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  n64 = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
  n64 = _mm256_slli_epi64(n64, 52);
  y = _mm256_mul_pd(y, _mm256_castsi256_pd(n64));

  return _mm256_andnot_pd(zero_mask, y);
}

double a_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

double a_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

double a_sq_l2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    out += d * d;
  }
  return out;
}

double a_sq_l2_scaled(const double* x, const double* y, const double* inv_h,
                      std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    d = _mm256_mul_pd(d, _mm256_loadu_pd(inv_h + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) {
    const double d = (x[i] - y[i]) * inv_h[i];
    out += d * d;
  }
  return out;
}

void a_exp_v(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = exp_sat(x[i]);
}

double a_exp_sum_shifted(const double* x, std::size_t n, double shift) {
  const __m256d sh = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, exp4(_mm256_sub_pd(_mm256_loadu_pd(x + i), sh)));
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += exp_sat(x[i] - shift);
  return out;
}

void a_gauss_accum(const double* ev, std::size_t m, const double* xs,
                   std::size_t n, double inv_h, double* out) {
  const __m256d vih = _mm256_set1_pd(inv_h);
  const __m256d mhalf = _mm256_set1_pd(-0.5);
  for (std::size_t s = 0; s < m; ++s) {
    const __m256d e = _mm256_set1_pd(ev[s]);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d t =
          _mm256_mul_pd(_mm256_sub_pd(e, _mm256_loadu_pd(xs + i)), vih);
      const __m256d arg = _mm256_mul_pd(_mm256_mul_pd(t, t), mhalf);
      acc = _mm256_add_pd(acc, exp4(arg));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
      const double t = (ev[s] - xs[i]) * inv_h;
      total += exp_sat(-0.5 * t * t);
    }
    out[s] = total;
  }
}

void a_polyexp_v(const double* z, double* out, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d quarter = _mm256_set1_pd(0.25);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(z + i));
    const __m256d e = exp4(_mm256_sub_pd(_mm256_setzero_pd(), a));
    const __m256d y =
        _mm256_mul_pd(quarter, _mm256_mul_pd(_mm256_add_pd(one, a), e));
    _mm256_storeu_pd(out + i, y);
  }
  for (; i < n; ++i) {
    const double a = std::fabs(z[i]);
    out[i] = 0.25 * (1.0 + a) * exp_sat(-a);
  }
}

void a_polyexp_deriv_v(const double* z, double* out, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d mquarter = _mm256_set1_pd(-0.25);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(z + i);
    const __m256d a = _mm256_andnot_pd(sign_mask, v);
    const __m256d e = exp4(_mm256_sub_pd(_mm256_setzero_pd(), a));
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(mquarter, _mm256_mul_pd(v, e)));
  }
  for (; i < n; ++i) {
    out[i] = -0.25 * z[i] * exp_sat(-std::fabs(z[i]));
  }
}

const Ops kAvx2Ops = {
    "avx2",          a_sum,        a_dot,       a_sq_l2,
    a_sq_l2_scaled,  a_exp_v,      a_exp_sum_shifted,
    a_gauss_accum,   a_polyexp_v,  a_polyexp_deriv_v,
};

}  // namespace

const Ops* avx2_ops_impl() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return &kAvx2Ops;
  }
  return nullptr;
}

}  // namespace opnb::kern

#endif  // x86-64
